use pauli_estimation::{
    delta_channel_uses, delta_qubit_budget, exact_error_entangled_closed, exact_error_entangled_enum,
    exact_error_separable_closed, exact_error_separable_enum, find_delta_maximum, run_experiment, run_sweep,
    scaled_delta, BudgetMode, ChannelParams, ErrorReport, ExperimentConfig, Lattice, Method, ResourceBudget, Scheme,
    SchemeSelection, SweepResource, SweepSpec, ENUMERATION_CAP,
};
use serde_json::json;

use crate::args::{DeltaArgs, ExactErrorArgs, MaximaArgs, ModeArg, ResourceArgs, SimulateArgs, SweepArgs};
use crate::error::CliError;
use crate::output::{data_number, report_number, to_value, CsvTable, Report, RunManifest};

type CmdResult = Result<Report, CliError>;

fn channel(p: [f64; 3]) -> Result<ChannelParams, CliError> {
    Ok(ChannelParams::from_array(p)?)
}

fn budget(qubits: Option<u64>, uses: Option<u64>) -> Result<Option<ResourceBudget>, CliError> {
    match (qubits, uses) {
        (Some(n), None) => Ok(Some(ResourceBudget::qubits(n)?)),
        (None, Some(k)) => Ok(Some(ResourceBudget::channel_uses(k)?)),
        (None, None) => Ok(None),
        (Some(_), Some(_)) => Err(CliError::Usage("--qubits and --uses are mutually exclusive".into())),
    }
}

fn budget_json(budget: &Option<ResourceBudget>) -> serde_json::Value {
    match budget {
        Some(b) => json!({ "mode": b.mode().to_string(), "total": b.total() }),
        None => serde_json::Value::Null,
    }
}

fn mode_name(mode: BudgetMode) -> &'static str {
    match mode {
        BudgetMode::Qubits => "qubits",
        BudgetMode::ChannelUses => "uses",
    }
}

/// Per-scheme resource for `exact-error`: an explicit flag wins over the
/// shared budget.
fn scheme_resources(scheme: SchemeSelection, resource: &ResourceArgs) -> Result<Vec<(Scheme, u64)>, CliError> {
    let shared = budget(resource.qubits, resource.uses)?;
    let wants = |s: Scheme| scheme.schemes().contains(&s);
    if resource.per_state.is_some() && !wants(Scheme::Separable) {
        return Err(CliError::Usage(
            "--per-state only applies to the separable scheme".into(),
        ));
    }
    if resource.ebits.is_some() && !wants(Scheme::Entangled) {
        return Err(CliError::Usage("--ebits only applies to the entangled scheme".into()));
    }
    scheme
        .schemes()
        .iter()
        .map(|&s| {
            let (explicit, flag) = match s {
                Scheme::Separable => (resource.per_state, "--per-state"),
                Scheme::Entangled => (resource.ebits, "--ebits"),
            };
            let from_budget = shared.map(|b| match s {
                Scheme::Separable => b.per_state(),
                Scheme::Entangled => b.ebits(),
            });
            match explicit.or(from_budget) {
                Some(0) => Err(CliError::Usage(format!("{flag} must be at least 1"))),
                Some(r) => Ok((s, r)),
                None => Err(CliError::Usage(format!(
                    "the {s} scheme needs {flag}, --qubits or --uses"
                ))),
            }
        })
        .collect()
}

pub fn exact_error(args: &ExactErrorArgs) -> CmdResult {
    let p = channel(args.params.p)?;
    let scheme = SchemeSelection::from(args.scheme);
    let resources = scheme_resources(scheme, &args.resource)?;

    let mut csv = CsvTable::new(vec![
        "scheme",
        "resource",
        "closed_form",
        "enumeration",
        "abs_difference",
    ]);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &(s, r) in &resources {
        let (closed, enumerated) = match s {
            Scheme::Separable => (
                exact_error_separable_closed(&p, r)?,
                (r <= ENUMERATION_CAP)
                    .then(|| exact_error_separable_enum(&p, r))
                    .transpose()?,
            ),
            Scheme::Entangled => (
                exact_error_entangled_closed(&p, r)?,
                (r <= ENUMERATION_CAP)
                    .then(|| exact_error_entangled_enum(&p, r))
                    .transpose()?,
            ),
        };
        let difference = enumerated.map(|e| (e - closed).abs());
        csv.push(vec![
            s.to_string(),
            r.to_string(),
            report_number(closed),
            enumerated.map(report_number).unwrap_or_default(),
            difference.map(report_number).unwrap_or_default(),
        ]);
        let mut reports = vec![ErrorReport {
            scheme: s,
            expected_error: closed,
            method: Method::ClosedForm,
        }];
        if let Some(e) = enumerated {
            reports.push(ErrorReport {
                scheme: s,
                expected_error: e,
                method: Method::Enumeration,
            });
        }
        for report in reports {
            let mut row = to_value(&report);
            row["resource"] = json!(r);
            rows.push(row);
        }
        summary.push(json!({ "scheme": s, "resource": r, "abs_difference": difference }));
    }

    let manifest = RunManifest::new(
        "exact-error",
        json!({
            "p": args.params.p,
            "scheme": format!("{:?}", scheme).to_lowercase(),
            "resources": resources.iter().map(|(s, r)| json!({ "scheme": s, "resource": r })).collect::<Vec<_>>(),
        }),
    );
    Ok(Report {
        manifest,
        csv,
        json: vec![("rows", json!(rows)), ("summary", json!(summary))],
    })
}

pub fn delta(args: &DeltaArgs) -> CmdResult {
    let p = channel(args.params.p)?;
    let b = budget(args.qubits, args.uses)?
        .ok_or_else(|| CliError::Usage("one of --qubits or --uses is required".into()))?;
    let (quantity, value) = match b.mode() {
        BudgetMode::Qubits => ("delta-qubits", delta_qubit_budget(&p, b.total())?),
        BudgetMode::ChannelUses => ("delta-uses", delta_channel_uses(&p, b.total())?),
    };
    let scaled = scaled_delta(b.mode(), &p);

    let mut csv = CsvTable::new(vec!["quantity", "budget", "value", "scaled_value"]);
    csv.push(vec![
        quantity.into(),
        b.total().to_string(),
        report_number(value),
        report_number(scaled),
    ]);
    let row = json!({
        "quantity": quantity,
        "mode": mode_name(b.mode()),
        "total": b.total(),
        "value": value,
        "scaled_value": scaled,
    });
    let manifest = RunManifest::new("delta", json!({ "p": args.params.p, "budget": budget_json(&Some(b)) }));
    Ok(Report {
        manifest,
        csv,
        json: vec![("rows", json!([row]))],
    })
}

fn sweep_resource(resource: &ResourceArgs) -> Result<Option<SweepResource>, CliError> {
    let given = [resource.qubits, resource.uses, resource.per_state, resource.ebits]
        .iter()
        .filter(|r| r.is_some())
        .count();
    if given > 1 {
        return Err(CliError::Usage(
            "give at most one of --qubits, --uses, --per-state, --ebits".into(),
        ));
    }
    if let Some(b) = budget(resource.qubits, resource.uses)? {
        return Ok(Some(SweepResource::Budget(b)));
    }
    Ok(resource
        .per_state
        .map(SweepResource::PerState)
        .or(resource.ebits.map(SweepResource::Ebits)))
}

pub fn sweep(args: &SweepArgs) -> CmdResult {
    // The lattice is checked before anything else so grid errors win.
    Lattice::new(args.slice, args.grid_steps)?;
    let spec = SweepSpec {
        slice: args.slice,
        grid_steps: args.grid_steps,
        quantity: args.quantity.into(),
        scale_by_budget: args.scaled,
    };
    let resource = sweep_resource(&args.resource)?;
    let rows = run_sweep(&spec, resource)?;

    let mut csv = CsvTable::new(vec!["p1", "p2", "p3", "value"]);
    for r in &rows {
        csv.push(vec![
            data_number(r.p1),
            data_number(r.p2),
            data_number(r.p3),
            data_number(r.value),
        ]);
    }
    let manifest = RunManifest::new(
        "sweep",
        json!({ "spec": to_value(&spec), "resource": to_value(&resource) }),
    );
    Ok(Report {
        manifest,
        csv,
        json: vec![("rows", to_value(&rows))],
    })
}

pub fn simulate(args: &SimulateArgs) -> CmdResult {
    let p = channel(args.params.p)?;
    let b = budget(args.qubits, args.uses)?
        .ok_or_else(|| CliError::Usage("one of --qubits or --uses is required".into()))?;
    let cfg = ExperimentConfig {
        p_true: p,
        budget: b,
        scheme: args.scheme.into(),
        trials: args.trials,
        master_seed: args.seed,
    };
    let summary = run_experiment(&cfg)?;

    let mut csv = CsvTable::new(vec![
        "scheme",
        "resource",
        "trials",
        "mean_error",
        "std_error",
        "reference",
        "z_score",
    ]);
    for s in &summary.schemes {
        csv.push(vec![
            s.scheme.to_string(),
            s.resource.to_string(),
            s.trials.to_string(),
            report_number(s.mean_error),
            report_number(s.std_error),
            report_number(s.reference),
            s.z_score.map(report_number).unwrap_or_default(),
        ]);
    }
    let manifest = RunManifest::new("simulate", json!({ "config": to_value(&cfg) })).seeded(args.seed);
    Ok(Report {
        manifest,
        csv,
        json: vec![("summary", to_value(&summary))],
    })
}

pub fn maxima(args: &MaximaArgs) -> CmdResult {
    let mode = match args.mode {
        ModeArg::Qubits => BudgetMode::Qubits,
        ModeArg::Uses => BudgetMode::ChannelUses,
    };
    let best = find_delta_maximum(mode, args.grid_steps, args.slice)?;

    let mut csv = CsvTable::new(vec!["mode", "grid_steps", "p1", "p2", "p3", "value"]);
    let [p1, p2, p3] = best.argmax;
    csv.push(vec![
        mode_name(mode).into(),
        best.grid_steps.to_string(),
        report_number(p1),
        report_number(p2),
        report_number(p3),
        report_number(best.value),
    ]);
    let mut summary = to_value(&best);
    summary["mode"] = json!(mode_name(mode));
    let manifest = RunManifest::new(
        "maxima",
        json!({ "mode": mode_name(mode), "grid_steps": args.grid_steps, "slice": to_value(&args.slice) }),
    );
    Ok(Report {
        manifest,
        csv,
        json: vec![("summary", summary)],
    })
}
