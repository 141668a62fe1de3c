//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p farcast-core --test acceptance -- --nocapture` to
//! see the per-criterion lines. Criterion 1 solves d = 2 schedules to
//! L = 1000 for seven exponents and takes a few seconds per exponent.

mod common;

use farcast_core::dipolar::{dilation_schedule, dvdx_analytic, prism_interaction};
use farcast_core::fit::fit_from_cumulative;
use farcast_core::reliability::{
    advantage_ratio, ghz_lifetime, max_qubits_gate_fidelity, max_qubits_longrange,
    protocol_wall_time, NnMode, ReliabilityParams,
};
use farcast_core::sim::{evolve_controlled_x, ghz_program};
use farcast_core::{
    build_mera_schedule, cnot_from_zz, echo_program, greedy_schedule, mera_time_bound,
    replay_mera, run_protocol, shell_bucketed_sums, solve_hypercube_times, ControlPrism,
    DilationKind, DilationPlan, EchoRole, LatticeSpec, MeraGateChoice, ProtocolMode,
    ProtocolPhase, PureState,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use std::f64::consts::{FRAC_PI_2, PI};

struct Criterion {
    id: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: &'static str) -> Self {
        Self {
            id,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("ACCEPTANCE {}: PASS", self.id);
        } else {
            println!("ACCEPTANCE {}: FAIL — {}", self.id, self.failures.join("; "));
            panic!("criterion {} failed: {}", self.id, self.failures.join("; "));
        }
    }
}

fn random_amplitude_pairs(count: usize, seed: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let theta = rng.random::<f64>() * FRAC_PI_2;
            let phi = rng.random::<f64>() * 2.0 * PI;
            (
                Complex64::new(theta.cos(), 0.0),
                Complex64::from_polar(theta.sin(), phi),
            )
        })
        .collect()
}

/// Criterion 1: d = 2 schedules to L = 1000, fitted over [900, 1000].
#[test]
fn criterion_1_scaling_exponents() {
    let mut c = Criterion::new("1 (scaling-exponent reproduction)");
    for &alpha in &[1.5, 2.0, 2.25, 2.5, 2.75, 3.0, 4.0] {
        let schedule = solve_hypercube_times(1000, 2, alpha).unwrap();
        let fit = fit_from_cumulative(2, alpha, &schedule.cumulative, 1000, 0.9).unwrap();
        let beta = fit.power_law.beta;
        if alpha == 1.5 {
            c.check(beta <= 0.05, format!("alpha=1.5: beta={beta:.4} > 0.05"));
        } else if alpha == 2.0 {
            let log = fit.logarithmic.expect("dual fit at alpha = d");
            c.check(
                log.r_squared >= 0.999,
                format!("alpha=2: log-fit r2={:.6} < 0.999", log.r_squared),
            );
        } else if alpha == 3.0 {
            c.check(beta < 1.0, format!("alpha=3: beta={beta:.4} not < 1"));
        } else if alpha == 4.0 {
            c.check(
                (beta - 1.0).abs() <= 0.05,
                format!("alpha=4: |beta-1|={:.4} > 0.05", (beta - 1.0).abs()),
            );
        } else {
            let expected = alpha - 2.0;
            c.check(
                (beta - expected).abs() <= 0.10,
                format!(
                    "alpha={alpha}: |beta-{expected}|={:.4} > 0.10",
                    (beta - expected).abs()
                ),
            );
        }
    }
    c.finish();
}

/// Criterion 2: three-qubit worked-example states and full transfer.
#[test]
fn criterion_2_three_qubit_analytics() {
    let mut c = Criterion::new("2 (three-qubit analytics)");
    let pairs_ab = random_amplitude_pairs(10, 42);
    for &alpha in &[1.0, 2.0, 3.0] {
        for &(a, b) in &pairs_ab {
            // Intermediate state after t1 = pi/2 of simultaneous drive.
            let initial = PureState::product_with_qubit(3, 0, a, b).unwrap();
            let h13 = 2f64.powf(-alpha);
            let state =
                evolve_controlled_x(&initial, &[(0, 1, 1.0), (0, 2, h13)], FRAC_PI_2).unwrap();
            let angle = PI / 2f64.powf(alpha + 1.0);
            let mut expected = vec![Complex64::ZERO; 8];
            expected[0b000] = a;
            expected[0b110] = -Complex64::I * b * angle.cos();
            expected[0b111] = -b * angle.sin();
            let worst = state
                .amplitudes()
                .iter()
                .zip(&expected)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0f64, f64::max);
            c.check(
                worst <= 1e-9,
                format!("intermediate state off by {worst:e} at alpha={alpha}"),
            );

            for mode in [ProtocolMode::Greedy, ProtocolMode::Hypercube] {
                let lattice = LatticeSpec::chain(3, alpha).unwrap();
                let ghz = run_protocol(&lattice, a, b, mode, ProtocolPhase::GhzOnly).unwrap();
                let err0 = (ghz.final_state.amplitude(0b000) - a).norm();
                let err7 = (ghz.final_state.amplitude(0b111) + b).norm();
                c.check(
                    err0 <= 1e-9 && err7 <= 1e-9,
                    format!("GHZ branch errors {err0:e}/{err7:e} at alpha={alpha} {mode:?}"),
                );

                let full =
                    run_protocol(&lattice, a, b, mode, ProtocolPhase::FullTransfer).unwrap();
                c.check(
                    full.fidelity >= 1.0 - 1e-9,
                    format!("transfer fidelity {:.12} at alpha={alpha} {mode:?}", full.fidelity),
                );
            }
        }
    }
    c.finish();
}

/// Criterion 3: phase-condition residuals and shell-time monotonicity.
#[test]
fn criterion_3_phase_condition() {
    let mut c = Criterion::new("3 (phase-condition residuals)");
    for (d, alphas) in [(1usize, vec![0.5, 2.0, 3.5]), (2, vec![0.5, 2.0, 3.5])] {
        for alpha in alphas {
            let s = solve_hypercube_times(1000, d, alpha).unwrap();
            let worst = s.residuals.iter().cloned().fold(0.0f64, f64::max);
            c.check(
                worst <= 1e-10,
                format!("d={d} alpha={alpha}: max residual {worst:e}"),
            );
            let monotone = s.times.windows(2).all(|w| w[1] < w[0]);
            c.check(monotone, format!("d={d} alpha={alpha}: t_q not strictly decreasing"));
        }
    }
    c.finish();
}

/// Criterion 4: GHZ branch phase (-i)^(N-1), with a dense matrix-exponential
/// oracle on N <= 6.
#[test]
fn criterion_4_ghz_phase_law() {
    let mut c = Criterion::new("4 (GHZ phase law)");
    let a = Complex64::new(0.6, 0.0);
    let b = Complex64::new(0.48, 0.64);

    let mut lattices: Vec<LatticeSpec> = (2..=10)
        .map(|n| LatticeSpec::chain(n, 3.0).unwrap())
        .collect();
    lattices.push(LatticeSpec::corner_to_corner(2, 2, 3.0).unwrap());
    lattices.push(LatticeSpec::corner_to_corner(2, 3, 3.0).unwrap());

    for lattice in &lattices {
        let n = lattice.site_count();
        for mode in [ProtocolMode::Greedy, ProtocolMode::Hypercube] {
            let report = run_protocol(lattice, a, b, mode, ProtocolPhase::GhzOnly).unwrap();
            let got = Complex64::new(report.ghz_phase.0, report.ghz_phase.1);
            let expected = farcast_core::sim::expected_ghz_phase(n);
            c.check(
                (got - expected).norm() <= 1e-9,
                format!("n={n} {mode:?}: phase {got} vs {expected}"),
            );

            if n <= 6 {
                // Independent dense-oracle replay of the forward program.
                let program = ghz_program(lattice, mode).unwrap();
                let u = common::program_unitary_dense(&program, n);
                let initial =
                    PureState::product_with_qubit(n, lattice.source_index(), a, b).unwrap();
                let dense = common::mat_vec(&u, initial.amplitudes());
                let worst = dense
                    .iter()
                    .zip(report.final_state.amplitudes())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0f64, f64::max);
                c.check(
                    worst <= 1e-9,
                    format!("n={n} {mode:?}: dense oracle deviates by {worst:e}"),
                );
            }
        }
    }
    c.finish();
}

/// Criterion 5: dipolar suite — scale invariance, monotonicity derivative,
/// dilation step constancy, generalized dilation sums.
#[test]
fn criterion_5_dipolar() {
    let mut c = Criterion::new("5 (dipolar suite)");

    // Scale invariance of the prism integral.
    let tol = 1e-9;
    let prism = ControlPrism::cube(1.0).unwrap();
    let target = [1.7, 0.15, 0.25];
    let base = prism_interaction(&prism, target, tol).unwrap();
    for lam in [0.5, 2.0, 10.0] {
        let scaled = ControlPrism::new(lam, lam, lam, 0.0).unwrap();
        let v = prism_interaction(
            &scaled,
            [target[0] * lam, target[1] * lam, target[2] * lam],
            tol,
        )
        .unwrap();
        c.check(
            (v - base).abs() <= 2.0 * tol,
            format!("scale invariance off by {:e} at lambda={lam}", (v - base).abs()),
        );
    }

    // Monte-Carlo cross-check of the integral itself.
    let mc_prism = ControlPrism::facing_origin(1.0, 1.0, 1.0).unwrap();
    let mc_target = [3.0, 0.0, 0.0];
    let quad = prism_interaction(&mc_prism, mc_target, 1e-10).unwrap();
    let kernel = |p: &[f64; 3]| {
        let u = [p[0] - mc_target[0], p[1] - mc_target[1], p[2] - mc_target[2]];
        let r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
        (u[0] * u[0] + u[1] * u[1] - 2.0 * u[2] * u[2]) / (r2 * r2 * r2.sqrt())
    };
    let (mc, std_err) =
        common::monte_carlo_box(kernel, [-1.0, -0.5, -0.5], [0.0, 0.5, 0.5], 10_000_000, 7);
    c.check(
        (quad - mc).abs() <= 3.0 * std_err,
        format!("quadrature {quad:.8} vs MC {mc:.8} +/- {std_err:.2e}"),
    );

    // Monotonicity: negative derivative on the full sampled region for three
    // prism shapes, matching finite-differenced quadrature.
    let shapes = [
        ControlPrism::facing_origin(1.0, 1.0, 1.0).unwrap(),
        ControlPrism::facing_origin(2.0, 1.0, 0.5).unwrap(),
        ControlPrism::facing_origin(0.5, 2.0, 1.5).unwrap(),
    ];
    for prism in &shapes {
        let mut all_negative = true;
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    let x = 0.05 + 0.3 * i as f64;
                    let y = (j as f64 / 9.0 - 0.5) * 0.98 * prism.ly;
                    let z = (k as f64 / 9.0 - 0.5) * 0.98 * prism.lz;
                    let v = dvdx_analytic(prism, [x, y, z]).unwrap();
                    all_negative &= v < 0.0;
                }
            }
        }
        c.check(all_negative, format!("dV/dx not negative on grid for {prism:?}"));

        let mut worst_rel = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let x = 0.3 + 0.6 * i as f64;
                    let y = (j as f64 - 1.0) * 0.3 * prism.ly;
                    let z = (k as f64 - 1.0) * 0.3 * prism.lz;
                    let analytic = dvdx_analytic(prism, [x, y, z]).unwrap();
                    let h = 1e-4;
                    let vp = prism_interaction(prism, [x + h, y, z], 1e-11).unwrap();
                    let vm = prism_interaction(prism, [x - h, y, z], 1e-11).unwrap();
                    let fd = (vp - vm) / (2.0 * h);
                    worst_rel = worst_rel.max(((analytic - fd) / analytic).abs());
                }
            }
        }
        c.check(
            worst_rel <= 1e-4,
            format!("finite-difference mismatch {worst_rel:e} for {prism:?}"),
        );
    }

    // Dilation: constant per-step times across 5 steps.
    let plan = DilationPlan::new(1.0, 2.0, 5, DilationKind::Dipolar).unwrap();
    let filled = dilation_schedule(&plan, 1e-6).unwrap();
    let t1 = filled.per_step_times[0];
    for (i, &t) in filled.per_step_times.iter().enumerate() {
        c.check(
            (t - t1).abs() <= 2.0 * filled.time_tolerance,
            format!(
                "step {} time {t:.9} differs from step 1 {t1:.9} beyond 2x tolerance {:e}",
                i + 1,
                filled.time_tolerance
            ),
        );
    }

    // Generalized dilation: per-step times follow lambda^(n(alpha-d)) and the
    // partial sums match the geometric series within 5%.
    for (alpha, d) in [(1.0, 2usize), (3.0, 2), (2.0, 3), (4.0, 3)] {
        let lam: f64 = 2.0;
        let plan =
            DilationPlan::new(1.0, lam, 10, DilationKind::PowerLaw { alpha, d }).unwrap();
        let filled = dilation_schedule(&plan, 1e-9).unwrap();
        let t1 = filled.per_step_times[0];
        let ratio_expected = lam.powf(alpha - d as f64);
        let mut geometric = 0.0;
        for (i, &t) in filled.per_step_times.iter().enumerate() {
            let predicted = t1 * ratio_expected.powi(i as i32);
            c.check(
                (t / predicted - 1.0).abs() <= 0.05,
                format!("alpha={alpha} d={d} step {}: {t:.6e} vs {predicted:.6e}", i + 1),
            );
            geometric += predicted;
        }
        c.check(
            (filled.total_time / geometric - 1.0).abs() <= 0.05,
            format!(
                "alpha={alpha} d={d}: total {:.6e} vs geometric sum {geometric:.6e}",
                filled.total_time
            ),
        );
    }
    c.finish();
}

/// Criterion 6: echo isolation and CNOT synthesis.
#[test]
fn criterion_6_echo_and_gate_synthesis() {
    let mut c = Criterion::new("6 (echo and gate synthesis)");
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);

    for trial in 0..20 {
        let n = rng.random_range(2..=4usize);
        let roles: Vec<Option<EchoRole>> = (0..n)
            .map(|_| {
                Some(if rng.random::<bool>() {
                    EchoRole::Control
                } else {
                    EchoRole::Target
                })
            })
            .collect();
        let mut couplings = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                couplings.push((i, j, rng.random::<f64>() * 2.0 - 1.0));
            }
        }
        let t = 0.25 + rng.random::<f64>();
        let program = echo_program(&roles, t, &couplings).unwrap();
        let u = common::program_matrix_via_simulator(&program, n);
        let cross: Vec<(usize, usize, f64)> = couplings
            .iter()
            .copied()
            .filter(|&(i, j, _)| roles[i] != roles[j])
            .collect();
        let ideal = common::zz_evolution_dense(n, &cross, t);
        let err = common::frobenius_distance_up_to_phase(&u, &ideal);
        c.check(err <= 1e-9, format!("echo trial {trial}: error {err:e}"));
    }

    let o = Complex64::ONE;
    let z = Complex64::ZERO;
    let cnot = vec![
        vec![o, z, z, z],
        vec![z, o, z, z],
        vec![z, z, z, o],
        vec![z, z, o, z],
    ];
    for &v in &[1.0, -1.0] {
        let program = cnot_from_zz(v).unwrap();
        let u = common::program_matrix_via_simulator(&program, 2);
        let err = common::frobenius_distance_up_to_phase(&u, &cnot);
        c.check(err <= 1e-12, format!("cnot error {err:e} at V={v}"));
    }
    c.finish();
}

/// Criterion 7: reliability headline numbers at paper defaults.
#[test]
fn criterion_7_reliability_headlines() {
    let mut c = Criterion::new("7 (reliability headline numbers)");
    let params = ReliabilityParams::paper_defaults();

    let n_lr = max_qubits_longrange(&params);
    c.check(
        (n_lr - 4e4).abs() / 4e4 <= 0.10,
        format!("N_lr = {n_lr:.0} not within 10% of 4e4"),
    );

    let bound = advantage_ratio(&params, NnMode::Bound).unwrap();
    c.check(
        (bound - 4.5).abs() <= 0.2,
        format!("bound ratio {bound:.3} not within 0.2 of 4.5"),
    );

    let exact = advantage_ratio(&params, NnMode::Exact).unwrap();
    c.check(
        (exact - 4.9).abs() <= 0.2,
        format!("exact ratio {exact:.3} not within 0.2 of 4.9"),
    );

    let n_gate = max_qubits_gate_fidelity(&params);
    c.check(
        (n_gate - 1500.0).abs() / 1500.0 <= 0.10,
        format!("gate-fidelity limit {n_gate:.0} not within 10% of 1500"),
    );

    let wall = protocol_wall_time(&params, n_lr);
    c.check(
        (wall - 25e-9).abs() / 25e-9 <= 0.2 + 1e-12,
        format!("wall time {:.2} ns not within 20% of 25 ns", wall * 1e9),
    );

    let lifetime = ghz_lifetime(&params, n_lr);
    c.check(
        (lifetime - 8e-9).abs() / 8e-9 <= 0.2,
        format!("GHZ lifetime {:.2} ns not within 20% of 8 ns", lifetime * 1e9),
    );
    c.finish();
}

/// Criterion 8: MERA layer counts, replay equivalence, and bound-regime
/// scaling ratios.
#[test]
fn criterion_8_mera() {
    let mut c = Criterion::new("8 (MERA)");

    for (l, phi, s) in [(8usize, 2usize, 3usize), (16, 2, 4), (1024, 2, 10), (81, 3, 4)] {
        let plan = mera_time_bound(l, phi, 1.0, 1).unwrap();
        c.check(
            plan.layers.len() == s,
            format!("layer count for L={l} phi={phi}: {} != {s}", plan.layers.len()),
        );
    }

    for l in [4usize, 8, 16] {
        for choice in [MeraGateChoice::Identity, MeraGateChoice::FixedEntangler] {
            let schedule = build_mera_schedule(l, 3.0).unwrap();
            let lowered = replay_mera(&schedule, choice).unwrap();
            let direct = common::mera_direct_state(&schedule, choice);
            let fidelity = common::vector_fidelity(lowered.amplitudes(), &direct);
            c.check(
                fidelity >= 1.0 - 1e-9,
                format!("replay fidelity {fidelity:.12} for L={l} {choice:?}"),
            );
        }
    }

    // Regime scaling ratios across one order of magnitude in L (x16).
    let (l_small, l_large) = (1usize << 9, 1usize << 13);
    for d in [1usize, 2] {
        let df = d as f64;
        for (alpha, predicted) in [
            (df - 0.5, 13.0 / 9.0),
            (df, (13.0f64 / 9.0).powi(2)),
            (df + 0.5, 16.0f64.powf(0.5)),
            (df + 2.0, 16.0),
        ] {
            let small = mera_time_bound(l_small, 2, alpha, d).unwrap().total_time;
            let large = mera_time_bound(l_large, 2, alpha, d).unwrap().total_time;
            let ratio = large / small;
            c.check(
                (ratio / predicted - 1.0).abs() <= 0.05,
                format!("d={d} alpha={alpha}: ratio {ratio:.4} vs predicted {predicted:.4}"),
            );
        }
    }

    // The entangler actually entangles (the replay check is non-trivial).
    let schedule = build_mera_schedule(8, 3.0).unwrap();
    let state = replay_mera(&schedule, MeraGateChoice::FixedEntangler).unwrap();
    let zeros = PureState::zeros(8).unwrap();
    c.check(
        state.fidelity(&zeros) < 0.99,
        "entangler produced a near-product state".into(),
    );
    c.finish();
}

/// Criterion 9: the standalone property suites run green (spot re-run of
/// each family; the full suites live in tests/properties.rs).
#[test]
fn criterion_9_property_suites() {
    let mut c = Criterion::new("9 (property suites standalone)");

    // Bucketed vs direct.
    for (q, d, alpha) in [(12usize, 2usize, 2.7), (6, 3, 1.3), (20, 1, 4.0)] {
        let sums = shell_bucketed_sums(q, d, alpha).unwrap();
        for p in 1..=q {
            let brute = common::brute_force_h(p, q, d, alpha);
            let rel = (sums[p - 1] - brute).abs() / brute;
            c.check(rel <= 1e-12, format!("bucketed vs brute p={p} q={q}: {rel:e}"));
        }
    }

    // Greedy dominance.
    for edge in [5usize, 9] {
        let lattice = LatticeSpec::corner_to_corner(2, edge, 3.0).unwrap();
        let log = greedy_schedule(&lattice);
        let hyper = solve_hypercube_times(edge - 1, 2, 3.0).unwrap();
        c.check(
            log.destination_completion <= hyper.one_way_time() + 1e-12,
            format!("greedy dominance failed at edge {edge}"),
        );
    }

    // Commutation-order independence.
    let state = PureState::product_with_qubit(
        4,
        0,
        Complex64::new(0.6, 0.0),
        Complex64::new(0.0, 0.8),
    )
    .unwrap();
    let pairs = [(0usize, 2usize, 1.0f64), (1, 3, 0.7), (0, 3, 0.4), (1, 2, 0.9)];
    let reference = evolve_controlled_x(&state, &pairs, 0.83).unwrap();
    let permuted_pairs = [(1usize, 2usize, 0.9f64), (0, 3, 0.4), (1, 3, 0.7), (0, 2, 1.0)];
    let permuted = evolve_controlled_x(&state, &permuted_pairs, 0.83).unwrap();
    let worst = permuted
        .amplitudes()
        .iter()
        .zip(reference.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max);
    c.check(worst <= 1e-12, format!("commutation order changed state by {worst:e}"));

    // Norm conservation through a full protocol.
    let lattice = LatticeSpec::chain(7, 2.0).unwrap();
    let report = run_protocol(
        &lattice,
        Complex64::new(0.6, 0.0),
        Complex64::new(0.48, 0.64),
        ProtocolMode::Greedy,
        ProtocolPhase::FullTransfer,
    )
    .unwrap();
    c.check(
        (report.final_state.norm() - 1.0).abs() <= 1e-10,
        "norm drifted through a full protocol".into(),
    );
    c.finish();
}
