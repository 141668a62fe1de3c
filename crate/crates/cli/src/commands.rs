//! Subcommand implementations.

use farcast_core::fit::predicted_beta;
use farcast_core::reliability::{
    advantage_ratio, ghz_lifetime, max_qubits_gate_fidelity, max_qubits_longrange, max_qubits_nn,
    p_success, protocol_wall_time, NnMode, ReliabilityParams, StepCount,
};
use farcast_core::{
    build_mera_schedule, dilation_schedule, dvdx_analytic, fit_scaling, greedy_schedule,
    mera_time_bound, prism_interaction, replay_mera, run_protocol, solve_hypercube_times,
    ControlPrism, DilationKind, DilationPlan, LatticeSpec, MeraGateChoice, ProtocolMode,
    ProtocolPhase,
};
use num_complex::Complex64;

use crate::output::{csv_document, fmt_f64, json_document, write_output};
use crate::{
    CliError, DipolarArgs, Fig3Args, FormatArg, GateArg, KernelArg, MeraArgs, ModeArg, PhaseArg,
    ReliabilityArgs, ScheduleArgs, SimulateArgs,
};

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Computation(err.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn schedule(mut args: ScheduleArgs) -> Result<(), CliError> {
    if args.smoke {
        args.l = args.l.min(50);
    }
    if args.l < 1 {
        return Err(invalid("need --L >= 1"));
    }
    if args.sweep && args.mode == ModeArg::Greedy {
        return Err(invalid("--sweep applies to hypercube mode only"));
    }
    let document = match args.mode {
        ModeArg::Hypercube => {
            let result = solve_hypercube_times(args.l, args.d, args.alpha)?;
            match args.format {
                FormatArg::Csv if args.sweep => {
                    // One-way GHZ-build time as a function of system size;
                    // shell times do not depend on L, so one solve covers
                    // every prefix.
                    let rows: Vec<String> = (1..=args.l)
                        .map(|l| format!("{l},{}", fmt_f64(result.cumulative[l - 1])))
                        .collect();
                    csv_document("L,one_way_time", &rows)
                }
                FormatArg::Csv => {
                    let rows: Vec<String> = (1..=args.l)
                        .map(|q| {
                            format!(
                                "{q},{},{}",
                                fmt_f64(result.times[q - 1]),
                                fmt_f64(result.cumulative[q - 1])
                            )
                        })
                        .collect();
                    csv_document("q,t_q,cumulative", &rows)
                }
                FormatArg::Json => json_document(serde_json::to_value(&result)?),
            }
        }
        ModeArg::Greedy => {
            let lattice = LatticeSpec::corner_to_corner(args.d, args.l + 1, args.alpha)?;
            let log = greedy_schedule(&lattice);
            match args.format {
                FormatArg::Csv => {
                    // Greedy rows are promotion events past the source.
                    let rows: Vec<String> = log
                        .events
                        .windows(2)
                        .enumerate()
                        .map(|(i, pair)| {
                            format!(
                                "{},{},{}",
                                i + 1,
                                fmt_f64(pair[1].time - pair[0].time),
                                fmt_f64(pair[1].time)
                            )
                        })
                        .collect();
                    csv_document("q,t_q,cumulative", &rows)
                }
                FormatArg::Json => json_document(serde_json::to_value(&log)?),
            }
        }
    };
    write_output(args.out.as_deref(), &document)?;
    Ok(())
}

fn parse_alpha_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parse = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("bad exponent value '{s}'")))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid("exponent grid must be start:stop:step"));
        }
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step <= 0.0 || !step.is_finite() || stop < start {
            return Err(invalid("exponent grid must have step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        spec.split(',').map(parse).collect()
    }
}

pub fn fig3(mut args: Fig3Args) -> Result<(), CliError> {
    if args.smoke {
        args.l_max = args.l_max.min(200);
    }
    let alphas = parse_alpha_grid(&args.alphas)?;
    if alphas.is_empty() {
        return Err(invalid("empty exponent grid"));
    }
    let mut analyses = Vec::with_capacity(alphas.len());
    for &alpha in &alphas {
        analyses.push(fit_scaling(args.d, alpha, args.l_max, args.window)?);
    }
    let document = match args.format {
        FormatArg::Csv => {
            let rows: Vec<String> = analyses
                .iter()
                .map(|analysis| {
                    let (log_slope, log_r2) = match &analysis.logarithmic {
                        Some(log) => (fmt_f64(log.beta), fmt_f64(log.r_squared)),
                        None => (String::new(), String::new()),
                    };
                    format!(
                        "{},{},{},{},{},{},{}",
                        fmt_f64(analysis.alpha),
                        fmt_f64(analysis.power_law.beta),
                        fmt_f64(analysis.power_law.r_squared),
                        analysis.power_law.model,
                        fmt_f64(predicted_beta(args.d, analysis.alpha)),
                        log_slope,
                        log_r2
                    )
                })
                .collect();
            csv_document(
                "alpha,beta,r_squared,model,predicted_beta,log_slope,log_r_squared",
                &rows,
            )
        }
        FormatArg::Json => json_document(serde_json::to_value(&analyses)?),
    };
    write_output(args.out.as_deref(), &document)?;
    Ok(())
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |v: &str| -> Result<f64, CliError> {
        v.trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("bad amplitude component '{v}'")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(invalid(format!("bad complex amplitude '{s}' (want re or re,im)"))),
    }
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cap = if args.smoke { 12 } else { 24 };
    if args.d < 1 || args.l < 2 {
        return Err(invalid("need --d >= 1 and --L >= 2"));
    }
    let n = args.l.pow(args.d as u32);
    if n > cap {
        return Err(invalid(format!("{n} qubits exceed the cap of {cap}")));
    }
    let a = parse_complex(&args.a)?;
    let b = parse_complex(&args.b)?;
    let lattice = LatticeSpec::corner_to_corner(args.d, args.l, args.alpha)?;
    let mode = match args.mode {
        ModeArg::Greedy => ProtocolMode::Greedy,
        ModeArg::Hypercube => ProtocolMode::Hypercube,
    };
    let phase = match args.phase {
        PhaseArg::GhzOnly => ProtocolPhase::GhzOnly,
        PhaseArg::FullTransfer => ProtocolPhase::FullTransfer,
    };
    let report = run_protocol(&lattice, a, b, mode, phase)?;
    let mut data = serde_json::json!({
        "n": report.n,
        "mode": report.mode,
        "phase": report.phase,
        "elapsed": report.elapsed,
        "fidelity": report.fidelity,
        "ghz_phase": [report.ghz_phase.0, report.ghz_phase.1],
    });
    if args.dump_state {
        data["final_state"] = serde_json::to_value(&report.final_state)?;
    }
    write_output(args.out.as_deref(), &json_document(data))?;
    Ok(())
}

fn parse_vec3(s: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("bad point '{s}' (want x,y,z)")));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("bad coordinate '{part}'")))?;
    }
    Ok(out)
}

pub fn dipolar(mut args: DipolarArgs) -> Result<(), CliError> {
    let modes = args.integral as usize + args.dvdx as usize + args.dilate as usize;
    if modes != 1 {
        return Err(invalid("choose exactly one of --integral, --dvdx, --dilate"));
    }
    if args.smoke {
        args.steps = args.steps.min(3);
        args.tol = args.tol.max(1e-6);
    }

    let document = if args.integral {
        let prism = ControlPrism::new(args.lx, args.ly, args.lz, args.x0)?;
        let target = parse_vec3(
            args.target
                .as_deref()
                .ok_or_else(|| invalid("--integral requires --target x,y,z"))?,
        )?;
        let value = prism_interaction(&prism, target, args.tol)?;
        let data = serde_json::json!({
            "prism": prism,
            "target": target,
            "tol": args.tol,
            "value": value,
        });
        match args.format {
            FormatArg::Json => json_document(data),
            FormatArg::Csv => csv_document("value", &[fmt_f64(value)]),
        }
    } else if args.dvdx {
        let prism = ControlPrism::new(args.lx, args.ly, args.lz, args.x0)?;
        let point = parse_vec3(
            args.point
                .as_deref()
                .ok_or_else(|| invalid("--dvdx requires --point x,y,z"))?,
        )?;
        let value = dvdx_analytic(&prism, point)?;
        let data = serde_json::json!({
            "prism": prism,
            "point": point,
            "value": value,
        });
        match args.format {
            FormatArg::Json => json_document(data),
            FormatArg::Csv => csv_document("value", &[fmt_f64(value)]),
        }
    } else {
        let kind = match args.kernel {
            KernelArg::Dipolar => DilationKind::Dipolar,
            KernelArg::Power => {
                let alpha = args
                    .alpha
                    .ok_or_else(|| invalid("--kernel power requires --alpha"))?;
                let d = args
                    .dim
                    .ok_or_else(|| invalid("--kernel power requires --dim"))?;
                DilationKind::PowerLaw { alpha, d }
            }
        };
        let plan = DilationPlan::new(args.edge, args.lambda, args.steps, kind)?;
        let filled = dilation_schedule(&plan, args.tol)?;
        match args.format {
            FormatArg::Json => json_document(serde_json::to_value(&filled)?),
            FormatArg::Csv => {
                let rows: Vec<String> = filled
                    .per_step_times
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| format!("{},{}", i + 1, fmt_f64(t)))
                    .collect();
                csv_document("step,per_step_time", &rows)
            }
        }
    };
    write_output(args.out.as_deref(), &document)?;
    Ok(())
}

fn parse_duration(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let (number, scale) = if let Some(v) = s.strip_suffix("ns") {
        (v, 1e-9)
    } else if let Some(v) = s.strip_suffix("us").or_else(|| s.strip_suffix("µs")) {
        (v, 1e-6)
    } else if let Some(v) = s.strip_suffix("ms") {
        (v, 1e-3)
    } else if let Some(v) = s.strip_suffix('s') {
        (v, 1.0)
    } else {
        (s, 1.0)
    };
    number
        .trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| invalid(format!("bad duration '{s}'")))
}

/// One output row of the reliability table.
fn reliability_row(params: &ReliabilityParams) -> Result<(f64, f64, f64, f64, f64), CliError> {
    let n_lr = max_qubits_longrange(params);
    let nn_bound = max_qubits_nn(params, NnMode::Bound);
    let nn_exact = max_qubits_nn(params, NnMode::Exact);
    let ratio = advantage_ratio(params, NnMode::Exact)?;
    let n_gate = max_qubits_gate_fidelity(params);
    Ok((n_lr, nn_bound, nn_exact, ratio, n_gate))
}

fn apply_field(params: &mut ReliabilityParams, name: &str, value: f64) -> Result<(), CliError> {
    match name {
        "dt" => params.dt = value,
        "lifetime" => params.gamma = 1.0 / value,
        "gamma" => params.gamma = value,
        "lambda" => params.lam = value,
        "eps" => params.eps = value,
        "c" => params.c = value,
        "P" => params.p_gate = value,
        other => return Err(invalid(format!("unknown sweep parameter '{other}'"))),
    }
    Ok(())
}

fn validated(params: ReliabilityParams) -> Result<ReliabilityParams, CliError> {
    Ok(ReliabilityParams::new(
        params.gamma,
        params.dt,
        params.lam,
        params.eps,
        params.c,
        params.p_gate,
    )?)
}

pub fn reliability(args: ReliabilityArgs) -> Result<(), CliError> {
    if args.lifetime.is_some() && args.gamma.is_some() {
        return Err(invalid("give either --lifetime or --gamma, not both"));
    }
    let mut params = ReliabilityParams::paper_defaults();
    if let Some(dt) = &args.dt {
        params.dt = parse_duration(dt)?;
    }
    if let Some(lifetime) = &args.lifetime {
        params.gamma = 1.0 / parse_duration(lifetime)?;
    }
    if let Some(gamma) = args.gamma {
        params.gamma = gamma;
    }
    if let Some(lam) = args.lambda {
        params.lam = lam;
    }
    if let Some(eps) = args.eps {
        params.eps = eps;
    }
    if let Some(c) = args.c {
        params.c = c;
    }
    if let Some(p) = args.p_gate {
        params.p_gate = p;
    }
    let params = validated(params)?;

    let document = if let Some(sweep) = &args.sweep {
        let (name, rest) = sweep
            .split_once('=')
            .ok_or_else(|| invalid("sweep must be name=start:stop:count"))?;
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid("sweep must be name=start:stop:count"));
        }
        let duration_like = matches!(name, "dt" | "lifetime");
        let parse_bound = |s: &str| -> Result<f64, CliError> {
            if duration_like {
                parse_duration(s)
            } else {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad sweep bound '{s}'")))
            }
        };
        let start = parse_bound(parts[0])?;
        let stop = parse_bound(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad sweep count '{}'", parts[2])))?;
        if count < 2 {
            return Err(invalid("sweep count must be at least 2"));
        }
        let count = if args.smoke { count.min(20) } else { count };

        let mut rows = Vec::with_capacity(count);
        let mut json_rows = Vec::with_capacity(count);
        for i in 0..count {
            let value = start + (stop - start) * i as f64 / (count - 1) as f64;
            let mut swept = params;
            apply_field(&mut swept, name, value)?;
            let swept = validated(swept)?;
            let (n_lr, nn_bound, nn_exact, ratio, n_gate) = reliability_row(&swept)?;
            rows.push(format!(
                "{},{},{},{},{},{}",
                fmt_f64(value),
                fmt_f64(n_lr),
                fmt_f64(nn_bound),
                fmt_f64(nn_exact),
                fmt_f64(ratio),
                fmt_f64(n_gate)
            ));
            json_rows.push(serde_json::json!({
                "param": value,
                "n_lr": n_lr,
                "n_nn_bound": nn_bound,
                "n_nn_exact": nn_exact,
                "ratio": ratio,
                "n_gate_limit": n_gate,
            }));
        }
        match args.format {
            FormatArg::Csv => {
                csv_document("param,n_lr,n_nn_bound,n_nn_exact,ratio,n_gate_limit", &rows)
            }
            FormatArg::Json => json_document(serde_json::Value::Array(json_rows)),
        }
    } else {
        let (n_lr, nn_bound, nn_exact, ratio_exact, n_gate) = reliability_row(&params)?;
        let ratio_bound = if params.lam == 2.0 {
            Some(advantage_ratio(&params, NnMode::Bound)?)
        } else {
            None
        };
        let n_eval = args.n.unwrap_or(n_lr);
        let wall = protocol_wall_time(&params, n_eval);
        let lifetime = ghz_lifetime(&params, n_eval);
        let success = p_success(&params, n_eval, StepCount::Continuous);
        match args.format {
            FormatArg::Csv => {
                let row = format!(
                    "{},{},{},{},{},{},{},{},{}",
                    fmt_f64(n_lr),
                    fmt_f64(nn_bound),
                    fmt_f64(nn_exact),
                    ratio_bound.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(ratio_exact),
                    fmt_f64(n_gate),
                    fmt_f64(wall * 1e9),
                    fmt_f64(lifetime * 1e9),
                    fmt_f64(success)
                );
                csv_document(
                    "n_lr,n_nn_bound,n_nn_exact,ratio_bound,ratio_exact,n_gate_limit,wall_time_ns,ghz_lifetime_ns,p_success",
                    &[row],
                )
            }
            FormatArg::Json => json_document(serde_json::json!({
                "params": params,
                "n_lr": n_lr,
                "n_nn_bound": nn_bound,
                "n_nn_exact": nn_exact,
                "ratio_bound": ratio_bound,
                "ratio_exact": ratio_exact,
                "n_gate_limit": n_gate,
                "evaluated_n": n_eval,
                "wall_time_s": wall,
                "ghz_lifetime_s": lifetime,
                "p_success": success,
            })),
        }
    };
    write_output(args.out.as_deref(), &document)?;
    Ok(())
}

pub fn mera(mut args: MeraArgs) -> Result<(), CliError> {
    let modes = args.bound as usize + args.schedule as usize + args.replay as usize;
    if modes != 1 {
        return Err(invalid("choose exactly one of --bound, --schedule, --replay"));
    }
    let document = if args.bound {
        let format = args.format.unwrap_or(FormatArg::Csv);
        let plan = mera_time_bound(args.l, args.phi, args.alpha, args.d)?;
        match format {
            FormatArg::Csv => {
                let row = format!(
                    "{},{},{},{},{},{}",
                    plan.l,
                    plan.phi,
                    fmt_f64(plan.alpha),
                    plan.d,
                    plan.regime,
                    fmt_f64(plan.total_time)
                );
                csv_document("L,phi,alpha,d,regime,value", &[row])
            }
            FormatArg::Json => json_document(serde_json::to_value(&plan)?),
        }
    } else {
        if args.phi != 2 || args.d != 1 {
            return Err(invalid(
                "--schedule and --replay support the 1D binary case only (--phi 2 --d 1)",
            ));
        }
        if args.format == Some(FormatArg::Csv) {
            return Err(invalid("schedule and replay dumps are JSON only"));
        }
        if args.smoke {
            args.l = args.l.min(if args.replay { 8 } else { 64 });
        }
        let schedule = build_mera_schedule(args.l, args.alpha)?;
        if args.schedule {
            json_document(serde_json::to_value(&schedule)?)
        } else {
            let choice = match args.gate {
                GateArg::Identity => MeraGateChoice::Identity,
                GateArg::Entangler => MeraGateChoice::FixedEntangler,
            };
            let state = replay_mera(&schedule, choice)?;
            json_document(serde_json::json!({
                "l": args.l,
                "alpha": args.alpha,
                "gate": choice,
                "total_time": schedule.total_time,
                "final_state": state,
            }))
        }
    };
    write_output(args.out.as_deref(), &document)?;
    Ok(())
}
