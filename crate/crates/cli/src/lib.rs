//! Command-line frontend: builds gate Hamiltonians, checks error transparency, runs
//! witness and decomposition analyses, and writes fidelity sweeps as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 construction or correctability
//! failure, 3 verification failure.

pub mod args;
pub mod output;

use std::collections::BTreeSet;
use std::ffi::OsString;

use clap::Parser;
use paritynest::codes::{lemma1_decompose, CodeSpec};
use paritynest::construct::{
    basic, direct_solve, idle, naive, phase_gate, theorem1, theorem2, EtHamiltonian,
};
use paritynest::fidelity::{fidelity_sweep, fit_loglog_slope, log_spaced};
use paritynest::fock::{cross_sector_residual, max_abs};
use paritynest::transparency::{check_error_transparency, check_general_et, EtReport, ET_TOL};
use paritynest::witness::refutation_sweep;
use paritynest::{Construction, ErrorSet, FidelityCurve};
use serde_json::{json, Value};

use args::{
    BenchArgs, BuildArgs, CheckArgs, Cli, Command, Common, DecomposeArgs, ErrorChoice, Format,
    GateArgs, GateSpec, WitnessArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONSTRUCTION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn construction(e: paritynest::Error) -> Failure {
    Failure {
        code: EXIT_CONSTRUCTION,
        message: e.to_string(),
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Check(a) => cmd_check(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Decompose(a) => cmd_decompose(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn code_of(common: &Common) -> Result<CodeSpec, Failure> {
    CodeSpec::binomial(common.code.spacing, common.code.cutoff).map_err(|e| usage(e.to_string()))
}

fn order_of(common: &Common, code: &CodeSpec, spec: Option<&GateSpec>) -> usize {
    spec.and_then(|s| s.order)
        .or(common.l)
        .unwrap_or_else(|| code.default_order())
}

fn error_set(choice: ErrorChoice, l: usize) -> ErrorSet {
    match choice {
        ErrorChoice::Full => ErrorSet::full(l),
        ErrorChoice::Jumps => ErrorSet::jumps_only(l),
    }
}

fn errors_name(choice: ErrorChoice) -> &'static str {
    match choice {
        ErrorChoice::Full => "full",
        ErrorChoice::Jumps => "jumps",
    }
}

fn json_only(common: &Common) -> Result<(), Failure> {
    match common.format {
        Some(Format::Csv) => Err(usage("csv output is only available for bench")),
        _ => Ok(()),
    }
}

fn validate_gate(spec: &GateSpec, gate: &GateArgs) -> Result<(), Failure> {
    if !gate.theta.is_finite() {
        return Err(usage("--theta must be finite"));
    }
    if spec.construction == Construction::Direct {
        if gate.offdiagonals.is_empty() {
            return Err(usage("direct needs --offdiagonals"));
        }
        if let Some(j) = gate.offdiagonals.iter().find(|&&j| j % 2 == 0) {
            return Err(usage(format!(
                "--offdiagonals entries must be odd, got {j}"
            )));
        }
    }
    Ok(())
}

fn build_gate(
    code: &CodeSpec,
    spec: &GateSpec,
    common: &Common,
    gate: &GateArgs,
) -> Result<EtHamiltonian, Failure> {
    let l = order_of(common, code, Some(spec));
    let errors = error_set(common.errors, l);
    match spec.construction {
        Construction::Naive => naive(code, &errors),
        Construction::Theorem1 => theorem1(code, l),
        Construction::Theorem2 => theorem2(code, l),
        Construction::Direct => {
            let allowed: BTreeSet<usize> = gate.offdiagonals.iter().copied().collect();
            direct_solve(code, &errors, &allowed)
        }
        Construction::Phase => phase_gate(code, gate.theta, l),
        Construction::Basic => basic(code),
        Construction::Idle => idle(code),
    }
    .map_err(construction)
}

fn report_json(report: &EtReport) -> Value {
    let residuals: Vec<Value> = report
        .entries
        .iter()
        .map(
            |e| json!({ "term": e.term.to_string(), "logical": e.logical, "residual": e.residual }),
        )
        .collect();
    json!({
        "passes": report.passes,
        "threshold": report.threshold,
        "max_residual": report.max_residual(),
        "residuals": residuals,
    })
}

fn code_json(common: &Common) -> Value {
    json!([common.code.spacing, common.code.cutoff])
}

fn cmd_build(a: BuildArgs) -> Result<i32, Failure> {
    json_only(&a.common)?;
    validate_gate(&a.construction, &a.gate)?;
    let code = code_of(&a.common)?;
    let h = build_gate(&code, &a.construction, &a.common, &a.gate)?;
    let report =
        check_error_transparency(&h.matrix, &code, &h.target, ET_TOL).map_err(construction)?;
    let scale = max_abs(&h.matrix);
    let nested = cross_sector_residual(&h.matrix, code.spacing()) <= 1e-10 * scale.max(1.0);
    let meta = json!({
        "command": "build",
        "code": code_json(&a.common),
        "construction": h.construction.name(),
        "l": order_of(&a.common, &code, Some(&a.construction)),
        "errors": errors_name(a.common.errors),
        "target": h.target.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    });
    let data = json!({
        "dim": code.dim(),
        "matrix": output::matrix_to_json(&h.matrix),
        "squeezing_orders": h.orders,
        "parity_nested": nested,
        "et_report": report_json(&report),
    });
    output::emit(a.common.out.as_deref(), &output::document(meta, data)).map_err(usage)?;
    Ok(EXIT_OK)
}

fn cmd_check(a: CheckArgs) -> Result<i32, Failure> {
    json_only(&a.common)?;
    let code = code_of(&a.common)?;
    let (h, source) = match (&a.hamiltonian, &a.construction) {
        (Some(path), _) => {
            let h = output::read_hamiltonian(path).map_err(usage)?;
            (h, Value::from(path.display().to_string()))
        }
        (None, Some(spec)) => {
            validate_gate(spec, &a.gate)?;
            (
                build_gate(&code, spec, &a.common, &a.gate)?.matrix,
                Value::from(spec.to_string()),
            )
        }
        (None, None) => return Err(usage("need --construction or --hamiltonian")),
    };
    let l = order_of(&a.common, &code, None);
    let errors = error_set(a.common.errors, l);
    let report = if a.general {
        check_general_et(&h, &code, &errors, ET_TOL)
    } else {
        check_error_transparency(&h, &code, &errors, ET_TOL)
    }
    .map_err(|e| usage(e.to_string()))?;
    let meta = json!({
        "command": "check",
        "code": code_json(&a.common),
        "source": source,
        "l": l,
        "errors": errors_name(a.common.errors),
        "mode": if a.general { "general" } else { "strict" },
    });
    output::emit(
        a.common.out.as_deref(),
        &output::document(meta, report_json(&report)),
    )
    .map_err(usage)?;
    Ok(if report.passes {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

fn curve_label(h: &EtHamiltonian, l: usize) -> String {
    match h.construction {
        Construction::Basic | Construction::Idle => h.construction.name().to_string(),
        c => format!("{c}-l{l}"),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<i32, Failure> {
    if !(a.t.is_finite() && a.t > 0.0) {
        return Err(usage("--t must be positive"));
    }
    if let Some(fit_max) = a.fit_max {
        if fit_max.is_nan() || fit_max <= 0.0 {
            return Err(usage("--fit-max must be positive"));
        }
    }
    for spec in &a.construction {
        validate_gate(spec, &a.gate)?;
    }
    let format = a.common.format.unwrap_or(Format::Csv);
    if format == Format::Csv && a.construction.len() > 1 && a.common.out.is_none() {
        return Err(usage("several curves in csv format need --out"));
    }
    let code = code_of(&a.common)?;
    let gammas = log_spaced(a.gammas.min, a.gammas.max, a.gammas.count);

    let mut gates = Vec::with_capacity(a.construction.len());
    for spec in &a.construction {
        let h = build_gate(&code, spec, &a.common, &a.gate)?;
        let l = order_of(&a.common, &code, Some(spec));
        gates.push((h, l));
    }
    let curves: Vec<FidelityCurve> = gates
        .iter()
        .map(|(h, l)| fidelity_sweep(&h.matrix, &code, &gammas, a.t).labeled(curve_label(h, *l)))
        .collect();

    let mut failed = false;
    let mut fits = Vec::with_capacity(curves.len());
    for curve in &curves {
        for f in &curve.failures {
            eprintln!("{}: gamma {:e} failed: {}", curve.label, f.gamma, f.message);
            failed = true;
        }
        let fit = a.fit_max.map(|max| fit_loglog_slope(curve, max));
        match &fit {
            Some(Ok(fit)) => eprintln!(
                "{}: slope {:.4} (r^2 {:.6}, {} points)",
                curve.label, fit.slope, fit.r_squared, fit.points_used
            ),
            Some(Err(e)) => eprintln!("{}: no fit: {e}", curve.label),
            None => {}
        }
        fits.push(fit.and_then(|f| f.ok()));
    }

    match format {
        Format::Csv if curves.len() == 1 => {
            output::emit(a.common.out.as_deref(), &output::curve_csv(&curves[0])).map_err(usage)?
        }
        Format::Csv => {
            let base = a.common.out.as_deref().expect("checked above");
            for curve in &curves {
                let path = output::labeled_path(base, &curve.label);
                output::emit(Some(&path), &output::curve_csv(curve)).map_err(usage)?;
            }
        }
        Format::Json => {
            let meta = json!({
                "command": "bench",
                "code": code_json(&a.common),
                "t": a.t,
                "gammas": { "min": a.gammas.min, "max": a.gammas.max, "count": a.gammas.count },
                "errors": errors_name(a.common.errors),
                "fit_max": a.fit_max,
            });
            let data: Vec<Value> = curves
                .iter()
                .zip(&gates)
                .zip(&fits)
                .map(|((curve, (h, l)), fit)| {
                    json!({
                        "label": curve.label,
                        "construction": h.construction.name(),
                        "l": l,
                        "points": curve.points,
                        "failures": curve.failures,
                        "fit": fit,
                    })
                })
                .collect();
            output::emit(
                a.common.out.as_deref(),
                &output::document(meta, Value::Array(data)),
            )
            .map_err(usage)?;
        }
    }
    if let Some(path) = &a.gnuplot {
        output::emit(Some(path), &output::gnuplot_script(&curves)).map_err(usage)?;
    }
    Ok(if failed { EXIT_CONSTRUCTION } else { EXIT_OK })
}

fn cmd_witness(a: WitnessArgs) -> Result<i32, Failure> {
    json_only(&a.common)?;
    let code = code_of(&a.common)?;
    let l = order_of(&a.common, &code, None);
    let reports = refutation_sweep(&code, l).map_err(construction)?;
    let refuted = reports.iter().all(|r| !r.consistent);
    for r in &reports {
        eprintln!(
            "J={:?} rank(M)={} rank([M|b])={}{}",
            r.odd_offdiagonals,
            r.rank_m,
            r.rank_mb,
            if r.consistent { " consistent" } else { "" }
        );
    }
    let meta = json!({ "command": "witness", "code": code_json(&a.common), "l": l });
    let configs: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "offdiagonals": r.odd_offdiagonals,
                "rank_m": r.rank_m,
                "rank_mb": r.rank_mb,
                "consistent": r.consistent,
            })
        })
        .collect();
    let data = json!({ "configurations": configs, "all_inconsistent": refuted });
    output::emit(a.common.out.as_deref(), &output::document(meta, data)).map_err(usage)?;
    Ok(if refuted { EXIT_OK } else { EXIT_VERIFICATION })
}

fn cmd_decompose(a: DecomposeArgs) -> Result<i32, Failure> {
    json_only(&a.common)?;
    let code = code_of(&a.common)?;
    let l = order_of(&a.common, &code, None);
    let dec = lemma1_decompose(&code, l).map_err(construction)?;
    let meta = json!({ "command": "decompose", "code": code_json(&a.common), "l": l });
    let data = json!({
        "unit_cutoff": dec.unit_cutoff,
        "weights": dec.weights,
        "residual": dec.residual,
    });
    output::emit(a.common.out.as_deref(), &output::document(meta, data)).map_err(usage)?;
    Ok(EXIT_OK)
}
