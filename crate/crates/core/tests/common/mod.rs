//! Independent oracles shared by the integration suites: dense matrix
//! exponentials, brute-force coupling sums, Monte-Carlo box integration, and
//! a minimal gate-by-gate state applicator. None of these reuse the library's
//! evolution paths.

#![allow(dead_code)]

use num_complex::Complex64;

pub type CMat = Vec<Vec<Complex64>>;

pub fn mat_eye(dim: usize) -> CMat {
    let mut m = vec![vec![Complex64::ZERO; dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::ONE;
    }
    m
}

pub fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let dim = a.len();
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            if aik == Complex64::ZERO {
                continue;
            }
            for j in 0..dim {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
        .collect()
}

fn mat_scale(a: &CMat, s: Complex64) -> CMat {
    a.iter()
        .map(|row| row.iter().map(|x| x * s).collect())
        .collect()
}

fn mat_add_assign(a: &mut CMat, b: &CMat) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (xa, xb) in ra.iter_mut().zip(rb) {
            *xa += xb;
        }
    }
}

fn max_row_sum(a: &CMat) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling-and-squaring with a Taylor series.
pub fn mat_exp(a: &CMat) -> CMat {
    let dim = a.len();
    let norm = max_row_sum(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = mat_scale(a, Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0));

    let mut result = mat_eye(dim);
    let mut term = mat_eye(dim);
    for k in 1..=60 {
        term = mat_mul(&term, &scaled);
        term = mat_scale(&term, Complex64::new(1.0 / k as f64, 0.0));
        mat_add_assign(&mut result, &term);
        if max_row_sum(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

/// Mask of `qubit` in a basis index, qubit 0 most significant.
pub fn qubit_mask(n: usize, qubit: usize) -> usize {
    1 << (n - 1 - qubit)
}

/// Dense generator of the controlled-X drive in the protocol frame:
/// `sum h |1><1|_control (x) X_target`.
pub fn controlled_x_generator(n: usize, pairs: &[(usize, usize, f64)]) -> CMat {
    let dim = 1 << n;
    let mut g = vec![vec![Complex64::ZERO; dim]; dim];
    for &(c, t, h) in pairs {
        let cm = qubit_mask(n, c);
        let tm = qubit_mask(n, t);
        for col in 0..dim {
            if col & cm != 0 {
                g[col ^ tm][col] += Complex64::new(h, 0.0);
            }
        }
    }
    g
}

/// Dense generator `sum V_ij Z_i Z_j`.
pub fn zz_generator(n: usize, pairs: &[(usize, usize, f64)]) -> CMat {
    let dim = 1 << n;
    let mut g = vec![vec![Complex64::ZERO; dim]; dim];
    for &(i, j, v) in pairs {
        let mi = qubit_mask(n, i);
        let mj = qubit_mask(n, j);
        for (b, row) in g.iter_mut().enumerate() {
            let zi = if b & mi == 0 { 1.0 } else { -1.0 };
            let zj = if b & mj == 0 { 1.0 } else { -1.0 };
            row[b] += Complex64::new(v * zi * zj, 0.0);
        }
    }
    g
}

fn embed_single(n: usize, qubit: usize, u: [[Complex64; 2]; 2]) -> CMat {
    let dim = 1 << n;
    let mask = qubit_mask(n, qubit);
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    #[allow(clippy::needless_range_loop)]
    for col in 0..dim {
        let bit = usize::from(col & mask != 0);
        for (rbit, urow) in u.iter().enumerate() {
            let row = if rbit == 1 { col | mask } else { col & !mask };
            out[row][col] += urow[bit];
        }
    }
    out
}

fn local_gate_matrix(gate: farcast_core::sim::LocalGate) -> [[Complex64; 2]; 2] {
    use farcast_core::sim::LocalGate;
    let z = Complex64::ZERO;
    let o = Complex64::ONE;
    match gate {
        LocalGate::X => [[z, o], [o, z]],
        LocalGate::Hadamard => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        LocalGate::RotZ(theta) => [
            [Complex64::from_polar(1.0, -theta / 2.0), z],
            [z, Complex64::from_polar(1.0, theta / 2.0)],
        ],
    }
}

/// Dense unitary of a whole pulse program via per-step matrix exponentials.
pub fn program_unitary_dense(program: &farcast_core::PulseProgram, n: usize) -> CMat {
    use farcast_core::PulseStep;
    let mut u = mat_eye(1 << n);
    for step in &program.steps {
        let step_u = match step {
            PulseStep::ControlledX { pairs, duration } => {
                let g = controlled_x_generator(n, pairs);
                mat_exp(&mat_scale(&g, Complex64::new(0.0, -duration)))
            }
            PulseStep::Zz { pairs, duration } => {
                let g = zz_generator(n, pairs);
                mat_exp(&mat_scale(&g, Complex64::new(0.0, -duration)))
            }
            PulseStep::Locals { gates } => {
                let mut m = mat_eye(1 << n);
                for &(q, gate) in gates {
                    m = mat_mul(&embed_single(n, q, local_gate_matrix(gate)), &m);
                }
                m
            }
        };
        u = mat_mul(&step_u, &u);
    }
    u
}

/// Exact diagonal unitary `exp(-i t sum V_ij Z_i Z_j)`, built directly.
pub fn zz_evolution_dense(n: usize, pairs: &[(usize, usize, f64)], t: f64) -> CMat {
    let dim = 1 << n;
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    for (b, row) in out.iter_mut().enumerate() {
        let mut energy = 0.0;
        for &(i, j, v) in pairs {
            let zi = if b & qubit_mask(n, i) == 0 { 1.0 } else { -1.0 };
            let zj = if b & qubit_mask(n, j) == 0 { 1.0 } else { -1.0 };
            energy += v * zi * zj;
        }
        row[b] = Complex64::from_polar(1.0, -t * energy);
    }
    out
}

pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    let mut acc = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (xa, xb) in ra.iter().zip(rb) {
            acc += (xa - xb).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Frobenius distance after aligning the global phase on the largest entry
/// of `reference`. An upper bound on the operator-norm distance up to phase.
pub fn frobenius_distance_up_to_phase(u: &CMat, reference: &CMat) -> f64 {
    let (mut bi, mut bj, mut best) = (0, 0, 0.0);
    for (i, row) in reference.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.norm() > best {
                best = e.norm();
                bi = i;
                bj = j;
            }
        }
    }
    if u[bi][bj].norm() == 0.0 {
        return f64::INFINITY;
    }
    let phase = (reference[bi][bj] / u[bi][bj])
        / (reference[bi][bj] / u[bi][bj]).norm();
    let aligned: CMat = u
        .iter()
        .map(|row| row.iter().map(|x| x * phase).collect())
        .collect();
    frobenius_distance(&aligned, reference)
}

/// Extract the dense matrix of a pulse program by executing it on every
/// basis state with the simulator (used when the simulator itself is the
/// object under test against an independently built ideal).
pub fn program_matrix_via_simulator(program: &farcast_core::PulseProgram, n: usize) -> CMat {
    let dim = 1 << n;
    let mut cols = Vec::with_capacity(dim);
    for basis in 0..dim {
        let mut amps = vec![Complex64::ZERO; dim];
        amps[basis] = Complex64::ONE;
        let mut state = farcast_core::PureState::from_amplitudes(n, amps).unwrap();
        program.execute(&mut state).unwrap();
        cols.push(state.amplitudes().to_vec());
    }
    (0..dim)
        .map(|i| (0..dim).map(|j| cols[j][i]).collect())
        .collect()
}

/// Brute-force `H(p, q)`: plain nested loops, naive summation order.
pub fn brute_force_h(p: usize, q: usize, d: usize, alpha: f64) -> f64 {
    assert!(p >= 1 && p <= q);
    let mut total = 0.0;
    let mut coords = vec![0i64; d];
    loop {
        let dist2: f64 = coords.iter().map(|&x| ((q as i64 - x) * (q as i64 - x)) as f64).sum();
        total += dist2.powf(-alpha / 2.0);
        // Odometer over [0, p-1]^d.
        let mut k = d;
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            coords[k] += 1;
            if coords[k] < p as i64 {
                break;
            }
            coords[k] = 0;
        }
    }
}

/// Plain Monte-Carlo box integral: returns `(estimate, standard_error)`.
pub fn monte_carlo_box<F: Fn(&[f64; 3]) -> f64>(
    f: F,
    lo: [f64; 3],
    hi: [f64; 3],
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let volume: f64 = (0..3).map(|k| hi[k] - lo[k]).product();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let p = [
            lo[0] + (hi[0] - lo[0]) * rng.random::<f64>(),
            lo[1] + (hi[1] - lo[1]) * rng.random::<f64>(),
            lo[2] + (hi[2] - lo[2]) * rng.random::<f64>(),
        ];
        let v = f(&p);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (volume * mean, volume * (var / n).sqrt())
}

/// Minimal gate-by-gate state applicator, independent of the library's
/// evolution code. Same amplitude convention: qubit 0 most significant.
pub struct MiniState {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl MiniState {
    pub fn zeros(n: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Self { n, amps }
    }

    pub fn apply_two_qubit(&mut self, q1: usize, q2: usize, gate: &[[Complex64; 4]; 4]) {
        let m1 = qubit_mask(self.n, q1);
        let m2 = qubit_mask(self.n, q2);
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
    }
}

/// Run the un-lowered MERA circuit directly: the same gates in the same
/// order on their logical operands, no transfers.
pub fn mera_direct_state(
    schedule: &farcast_core::MeraSchedule,
    choice: farcast_core::MeraGateChoice,
) -> Vec<Complex64> {
    let gate = farcast_core::mera::mera_gate_matrix(choice);
    let mut state = MiniState::zeros(schedule.l);
    for layer in &schedule.layers {
        for round in [&layer.isometries, &layer.disentanglers] {
            for lowered in round {
                state.apply_two_qubit(lowered.a, lowered.b, &gate);
            }
        }
    }
    state.amps
}

/// `|<a|b>|` for raw amplitude vectors.
pub fn vector_fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm()
}
