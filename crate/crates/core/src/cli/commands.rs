use std::fmt::Write as _;

use super::config::{finite, positive, require, EngineName, MethodName, RunConfig, Sections};
use super::CliError;
use crate::chain::{chain_report, gibbs_from_energy, gibbs_from_lambda, ChainModel};
use crate::classical::{classical_entropy, classical_multipliers};
use crate::dynamics::scan::log_grid;
use crate::dynamics::{
    classical_limit_scan, evolve_taylor, matrix_oracle, mc_oracle, Engine, McConfig, Method, PolynomialPotential,
    QuadraticSolution, TaylorConfig, TrajectoryPoint, TrajectoryRecord,
};
use crate::params::{Constants, Dof, PacketParams};
use crate::qpacket::{
    build_truncated_state, diagonal_weights, minimal_cutoff, quantum_entropy, quantum_multipliers, QuantumMEPacket,
};

/// What a command produced: a report for standard output, an optional CSV
/// body and diagnostics for standard error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub report: String,
    pub csv: Option<String>,
    pub diagnostics: Vec<String>,
}

fn constants(cfg: &RunConfig) -> Result<Constants, CliError> {
    match cfg.constants {
        None => Ok(Constants::default()),
        Some(c) => {
            let hbar = positive("constants.hbar", c.hbar)?;
            let v = match c.v {
                Some(v) => positive("constants.v", v)?,
                None => Constants::with_hbar(hbar).v,
            };
            Ok(Constants { hbar, v })
        }
    }
}

fn packet_params(cfg: &RunConfig) -> Result<PacketParams, CliError> {
    let dofs = cfg.packet.as_deref().unwrap_or_default();
    if dofs.is_empty() {
        return Err(CliError::Parse("[[packet]] needs at least one entry".into()));
    }
    let mut out = Vec::new();
    for (i, d) in dofs.iter().enumerate() {
        out.push(Dof::new(
            finite(&format!("packet[{i}].q"), d.q)?,
            finite(&format!("packet[{i}].p"), d.p)?,
            positive(&format!("packet[{i}].dq"), d.dq)?,
            positive(&format!("packet[{i}].dp"), d.dp)?,
        ));
    }
    let params = PacketParams::new(out, constants(cfg)?)?;
    params.check_uncertainty()?;
    Ok(params)
}

fn single_dof(params: &PacketParams) -> Result<Dof, CliError> {
    params.dof().copied().map_err(|_| CliError::Validation("[[packet]]: this command needs exactly one entry".into()))
}

fn potential(cfg: &RunConfig) -> Result<PolynomialPotential, CliError> {
    let p = cfg.potential.as_ref().ok_or_else(|| CliError::Parse("missing [potential]".into()))?;
    positive("potential.mu", p.mu)?;
    for (k, c) in p.coeffs.iter().enumerate() {
        finite(&format!("potential.coeffs[{k}]"), *c)?;
    }
    PolynomialPotential::new(p.mu, p.coeffs.clone()).map_err(|e| CliError::Validation(format!("potential: {e}")))
}

fn fmt_weights(w: &[f64]) -> String {
    w.iter().map(|x| format!("{x:.10}")).collect::<Vec<_>>().join(", ")
}

/// Multipliers, entropies, `nu`, leading weights and constraint residuals.
pub fn cmd_packet(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.check_sections("packet", &Sections { required: &["packet"], optional: &["constants"] })?;
    let params = packet_params(cfg)?;
    let hbar = params.hbar();
    let mut r = String::new();
    let cm = classical_multipliers(&params)?;
    writeln!(r, "hbar = {hbar}, v = {}", params.constants.v).unwrap();
    writeln!(r, "classical entropy = {:.12}", classical_entropy(&params)?).unwrap();
    let qm = quantum_multipliers(&params).ok();
    let mut total_quantum = 0.0;
    for (i, dof) in params.dofs.iter().enumerate() {
        let nu = dof.nu(hbar);
        let m = &cm.per_dof[i];
        writeln!(r, "dof {i}: Q = {}, P = {}, dQ = {}, dP = {}, nu = {nu:.12}", dof.q, dof.p, dof.dq, dof.dp).unwrap();
        // `+ 0.0` prints -0 as 0
        writeln!(
            r,
            "  classical multipliers l1..l4 = {:.12}, {:.12}, {:.12}, {:.12}",
            m.l1 + 0.0,
            m.l2 + 0.0,
            m.l3,
            m.l4
        )
        .unwrap();
        match &qm {
            Some(q) => {
                let m = &q.per_dof[i];
                writeln!(
                    r,
                    "  quantum multipliers l1..l4 = {:.12}, {:.12}, {:.12}, {:.12}",
                    m.l1 + 0.0,
                    m.l2 + 0.0,
                    m.l3,
                    m.l4
                )
                .unwrap();
            }
            None => writeln!(r, "  quantum multipliers: none (pure-state boundary, nu = 1)").unwrap(),
        }
        let s = quantum_entropy(nu)?;
        total_quantum += s;
        writeln!(r, "  quantum entropy = {s:.12}").unwrap();
        writeln!(r, "  weights R_0..R_4 = {}", fmt_weights(&diagonal_weights(nu, 4)?)).unwrap();
        let single = PacketParams::single_with(*dof, params.constants)?;
        let state = build_truncated_state(&QuantumMEPacket::new(single)?, minimal_cutoff(nu))?;
        let res = state.constraint_residuals(dof);
        writeln!(
            r,
            "  truncated state dim {}: residuals Q {:.2e}, P {:.2e}, dQ {:.2e}, dP {:.2e}, trace defect {:.2e}",
            state.dim, res[0], res[1], res[2], res[3], state.defect
        )
        .unwrap();
    }
    if params.n_dofs() > 1 {
        writeln!(r, "total quantum entropy = {total_quantum:.12}").unwrap();
    }
    Ok(Output { report: r, ..Default::default() })
}

fn time_grid(t_max: f64, n_out: usize) -> Vec<f64> {
    (0..n_out).map(|i| t_max * i as f64 / (n_out - 1) as f64).collect()
}

/// Trajectory CSV by the configured method.
pub fn cmd_evolve(cfg: &RunConfig, seed_override: Option<u64>) -> Result<Output, CliError> {
    cfg.check_sections(
        "evolve",
        &Sections { required: &["packet", "potential", "evolve"], optional: &["constants", "output"] },
    )?;
    let params = packet_params(cfg)?;
    let dof = single_dof(&params)?;
    let pot = potential(cfg)?;
    let ev = cfg.evolve.as_ref().unwrap();
    let t_max = positive("evolve.t_max", ev.t_max)?;
    if ev.n_out < 2 {
        return Err(CliError::Validation(format!("evolve.n_out: must be >= 2, got {}", ev.n_out)));
    }
    let times = time_grid(t_max, ev.n_out);
    let hbar = params.hbar();
    let mut diagnostics = Vec::new();
    let rec = match ev.method {
        MethodName::Closed => {
            let sol = QuadraticSolution::new(&pot).map_err(|e| CliError::Validation(format!("evolve.method: {e}")))?;
            diagnostics.push(format!("regime {}", sol.regime.name()));
            let mut rec = TrajectoryRecord::new(Method::ClosedForm);
            for &t in &times {
                rec.points.push(TrajectoryPoint { t, values: sol.evolve(&dof, t), errors: [0.0; 4] });
            }
            rec
        }
        MethodName::Taylor => {
            let max_order = require("evolve.taylor_order", ev.taylor_order)?;
            let tol = positive("evolve.tol", ev.tol.unwrap_or(1e-8))?;
            let engine = match ev.engine.unwrap_or(EngineName::Quantum) {
                EngineName::Quantum => Engine::Quantum,
                EngineName::Classical => Engine::Classical,
            };
            let cfg = TaylorConfig { max_order, tol, ..TaylorConfig::default() };
            evolve_taylor(&dof, hbar, &pot, engine, &times, &cfg)?
        }
        MethodName::Mc => {
            let samples = require("evolve.mc_samples", ev.mc_samples)?;
            let seed = require("evolve.seed", seed_override.or(ev.seed))?;
            let steps = ev.mc_steps.unwrap_or(4096);
            mc_oracle(&dof, &pot, &times, &McConfig { samples, seed, steps, ..McConfig::default() })?
        }
        MethodName::Matrix => {
            let dim = require("evolve.trunc_dim", ev.trunc_dim)?;
            matrix_oracle(&QuantumMEPacket::new(params.clone())?, &pot, &times, dim)?
        }
    };
    rec.validate()?;
    diagnostics.extend(rec.diagnostics.iter().cloned());
    Ok(Output { report: String::new(), csv: Some(rec.to_csv_string()?), diagnostics })
}

/// Scan CSV plus the fitted decay exponent of the leading deviation.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.check_sections(
        "scan",
        &Sections { required: &["packet", "potential", "scan"], optional: &["constants", "output"] },
    )?;
    let params = packet_params(cfg)?;
    let dof = single_dof(&params)?;
    let pot = potential(cfg)?;
    let sc = cfg.scan.as_ref().unwrap();
    let s_min = positive("scan.s_min", sc.s_min)?;
    let s_max = positive("scan.s_max", sc.s_max)?;
    if s_max < s_min {
        return Err(CliError::Validation(format!("scan.s_max: must be >= s_min, got {s_max} < {s_min}")));
    }
    if sc.n_points < 2 {
        return Err(CliError::Validation(format!("scan.n_points: must be >= 2, got {}", sc.n_points)));
    }
    let t_probe = positive("scan.t_probe", sc.t_probe)?;
    let taylor = TaylorConfig {
        max_order: sc.taylor_order.unwrap_or(TaylorConfig::default().max_order),
        tol: positive("scan.tol", sc.tol.unwrap_or(1e-8))?,
        ..TaylorConfig::default()
    };
    let nu_min = dof.scaled(s_min).nu(params.hbar());
    if nu_min <= 1.0 {
        return Err(CliError::Validation(format!("scan.s_min: nu(s_min) = {nu_min} must exceed 1")));
    }
    let res = classical_limit_scan(&dof, params.hbar(), &pot, t_probe, &log_grid(s_min, s_max, sc.n_points), &taylor)?;
    let report = match res.fitted_exponent() {
        Some(e) => format!("fitted exponent of leading deviation vs s: {e:.4}\n"),
        None => "fitted exponent of leading deviation vs s: undefined (deviations vanish)\n".to_string(),
    };
    Ok(Output { report, csv: Some(res.to_csv_string()?), diagnostics: vec![] })
}

/// Mode table CSV and a summary block.
pub fn cmd_chain(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.check_sections("chain", &Sections { required: &["chain"], optional: &["constants", "output"] })?;
    let c = cfg.chain.as_ref().unwrap();
    let hbar = constants(cfg)?.hbar;
    let model = ChainModel::new(
        c.n_particles,
        positive("chain.mu", c.mu)?,
        positive("chain.kappa", c.kappa)?,
        positive("chain.xi", c.xi)?,
        hbar,
    )
    .map_err(|e| CliError::Validation(format!("chain: {e}")))?;
    let gibbs = match (c.energy, c.lambda) {
        (Some(e), None) => gibbs_from_energy(&model, finite("chain.E", e)?)?,
        (None, Some(l)) => gibbs_from_lambda(&model, positive("chain.lambda", l)?)?,
        _ => return Err(CliError::Parse("chain: give exactly one of `E` and `lambda`".into())),
    };
    let report = chain_report(&model, gibbs);
    let mut r = String::new();
    writeln!(r, "N = {}, N xi = {}", model.n(), model.n() as f64 * model.xi).unwrap();
    for (k, v) in report.summary() {
        writeln!(r, "{k} = {v:.12e}").unwrap();
    }
    let mut csv = Vec::new();
    report.write_modes_csv(&mut csv)?;
    Ok(Output {
        report: r,
        csv: Some(String::from_utf8(csv).expect("csv is utf-8")),
        diagnostics: vec![format!("length convention: first to last particle")],
    })
}
