use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::PathBuf;

use anyhow::Result;
use serde_json::{json, Value};

use rkforge::adjoint::{average_symmetric, average_symplectic, symmetric_adjoint, symplectic_adjoint};
use rkforge::integrate::{convergence_study, error_norm, integrate, kepler_problem, linear_problem, sci, step_count};
use rkforge::order::{
    all_satisfied, check_b_tol, check_c_tol, check_d_tol, detect_order_tol, reports_to_csv, tree_conditions,
    FLOAT_RESIDUAL_TOL,
};
use rkforge::ssrk5::{construct_ssrk5, sweep_family, ConstructionParams};
use rkforge::stability::{adjoint_stability_identity, algebraic_stability, sample_region, stability_function, Window};
use rkforge::tableau::catalog;
use rkforge::{AnyTableau, OdeProblem, Scalar, Tableau, DEFAULT_FLOAT_TOL};

use crate::input::{exact_arg, load, usage, write};
use crate::{
    CatalogArgs, CheckOrderArgs, Cli, Command, ConstructArgs, ConstructCommand, ConvergenceArgs, Format, InputArg,
    IntegrateArgs, Kind, Problem, StabilityArgs, SweepArgs, TransformArgs,
};

/// Writes to stdout; a closed pipe ends the process quietly.
fn say(text: impl AsRef<str>) {
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_ref().as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(1);
    }
}

/// Order checks look at trees up to this size in `show` and transform reports.
const REPORT_ORDER_CAP: usize = 6;

struct Ctx {
    json: bool,
    float_tol: Option<f64>,
}

impl Ctx {
    fn structural_tol<S: Scalar>(&self) -> f64 {
        if S::EXACT {
            0.0
        } else {
            self.float_tol.unwrap_or(DEFAULT_FLOAT_TOL)
        }
    }

    fn residual_tol<S: Scalar>(&self) -> f64 {
        if S::EXACT {
            0.0
        } else {
            self.float_tol.unwrap_or(FLOAT_RESIDUAL_TOL)
        }
    }

    fn residual_tol_of<S: Scalar>(&self, _t: &Tableau<S>) -> f64 {
        self.residual_tol::<S>()
    }

    fn structural_tol_of<S: Scalar>(&self, _t: &Tableau<S>) -> f64 {
        self.structural_tol::<S>()
    }

    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            say(serde_json::to_string_pretty(&value).expect("json value") + "\n");
        } else {
            say(text());
        }
    }
}

macro_rules! with_tableau {
    ($any:expr, $t:ident => $body:expr) => {
        match $any {
            AnyTableau::Exact($t) => $body,
            AnyTableau::Float($t) => $body,
        }
    };
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(usage(format!("tolerance must be a nonnegative number, got {tol}")));
        }
    }
    let ctx = Ctx {
        json: cli.json,
        float_tol: cli.tol,
    };
    match &cli.command {
        Command::Show(a) => show(&ctx, a),
        Command::Adjoint(a) => transform(&ctx, a, false),
        Command::Average(a) => transform(&ctx, a, true),
        Command::CheckOrder(a) => check_order(&ctx, a),
        Command::Stability(a) => stability(&ctx, a),
        Command::Construct(ConstructCommand::Ssrk5(a)) => construct(&ctx, a),
        Command::Construct(ConstructCommand::Sweep(a)) => sweep(&ctx, a),
        Command::Integrate(a) => run_integrate(&ctx, a),
        Command::Convergence(a) => convergence(&ctx, a),
        Command::Catalog(a) => list_catalog(&ctx, a),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(serde::Serialize)]
struct Properties {
    explicit: bool,
    row_sum_consistent: bool,
    symmetric: bool,
    symplectic: bool,
    order: usize,
}

fn properties<S: Scalar>(ctx: &Ctx, t: &Tableau<S>) -> Result<Properties> {
    let tol = ctx.structural_tol::<S>();
    Ok(Properties {
        explicit: t.is_explicit(),
        row_sum_consistent: t.is_row_sum_consistent(tol),
        symmetric: t.is_symmetric_coeffs_tol(tol),
        symplectic: t.is_symplectic_tol(tol),
        order: detect_order_tol(t, REPORT_ORDER_CAP, ctx.residual_tol::<S>())?,
    })
}

fn properties_line(p: &Properties) -> String {
    format!(
        "order {}, explicit: {}, symmetric: {}, symplectic: {}, row-sum consistent: {}",
        p.order,
        yes(p.explicit),
        yes(p.symmetric),
        yes(p.symplectic),
        yes(p.row_sum_consistent)
    )
}

fn matrix_text<S: Scalar>(t: &Tableau<S>) -> String {
    let cells: Vec<Vec<String>> = (0..t.stages())
        .map(|i| {
            let mut row = vec![t.c()[i].to_string(), "|".into()];
            row.extend((0..t.stages()).map(|j| t.a_ij(i, j).to_string()));
            row
        })
        .chain(std::iter::once({
            let mut row = vec![String::new(), "|".into()];
            row.extend(t.b().iter().map(|x| x.to_string()));
            row
        }))
        .collect();
    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|k| cells.iter().map(|r| r[k].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (n, row) in cells.iter().enumerate() {
        if n == t.stages() {
            let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 2 * cols));
        }
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn show(ctx: &Ctx, a: &InputArg) -> Result<()> {
    let any = load(&a.input)?;
    let json_doc: Value = serde_json::from_str(&any.to_json())?;
    with_tableau!(&any, t => {
        let p = properties(ctx, t)?;
        let r = stability_function(t);
        ctx.emit(
            json!({
                "tableau": json_doc,
                "properties": p,
                "stability_function": r.to_string(),
            }),
            || {
                format!(
                    "{} ({}, {} stages)\n{}{}\nR(z) = {}\n",
                    t.name(),
                    t.kind().as_str(),
                    t.stages(),
                    matrix_text(t),
                    properties_line(&p),
                    r
                )
            },
        );
        Ok(())
    })
}

fn transform(ctx: &Ctx, a: &TransformArgs, average: bool) -> Result<()> {
    let any = load(&a.input)?;
    let result: AnyTableau = with_tableau!(&any, t => {
        match (a.kind, average) {
            (Kind::Symmetric, false) => symmetric_adjoint(t).into(),
            (Kind::Symmetric, true) => average_symmetric(t).into(),
            (Kind::Symplectic, false) => symplectic_adjoint(t)?.into(),
            (Kind::Symplectic, true) => average_symplectic(t)?.into(),
        }
    });
    let before = with_tableau!(&any, t => properties(ctx, t)?);
    let after = with_tableau!(&result, t => properties(ctx, t)?);
    let report = json!({
        "input": any.name(),
        "output": result.name(),
        "order_before": before.order,
        "order_after": after.order,
        "order_preserved": before.order == after.order,
        "symmetric": after.symmetric,
        "symplectic": after.symplectic,
    });
    let line = format!(
        "{} -> {}: order {} -> {} (preserved: {}), symmetric: {}, symplectic: {}\n",
        any.name(),
        result.name(),
        before.order,
        after.order,
        yes(before.order == after.order),
        yes(after.symmetric),
        yes(after.symplectic)
    );
    match &a.out {
        Some(path) => {
            write(path, &result.to_json())?;
            ctx.emit(report, || line);
        }
        None => {
            say(result.to_json());
            eprint!("{line}");
        }
    }
    Ok(())
}

fn check_order(ctx: &Ctx, a: &CheckOrderArgs) -> Result<()> {
    let any = load(&a.input)?;
    let max = a.max as usize;
    let format = if ctx.json { Format::Json } else { a.format };
    with_tableau!(&any, t => {
        let tol = ctx.residual_tol_of(t);
        let order = detect_order_tol(t, max, tol)?;
        let reports = tree_conditions(t, max, tol)?;
        let simplified = match &a.simplified {
            Some(v) => {
                let [p, eta, zeta] = v[..] else {
                    return Err(usage("--simplified takes three values p,eta,zeta"));
                };
                if p == 0 || eta == 0 || zeta == 0 {
                    return Err(usage("--simplified values must be positive"));
                }
                let mut r = check_b_tol(t, p, tol);
                r.extend(check_c_tol(t, eta, tol));
                r.extend(check_d_tol(t, zeta, tol));
                let sufficient = p <= eta + zeta + 1 && p <= 2 * eta + 2 && all_satisfied(&r);
                Some((p, eta, zeta, r, sufficient))
            }
            None => None,
        };
        match format {
            Format::Json => {
                let mut doc = json!({
                    "name": t.name(),
                    "order": order,
                    "max": max,
                    "conditions": reports,
                });
                if let Some((p, eta, zeta, r, sufficient)) = &simplified {
                    doc["simplified"] = json!({
                        "p": p, "eta": eta, "zeta": zeta,
                        "sufficient": sufficient,
                        "conditions": r,
                    });
                }
                say(serde_json::to_string_pretty(&doc)? + "\n");
            }
            Format::Csv => {
                say(reports_to_csv(&reports));
                if let Some((_, _, _, r, _)) = &simplified {
                    say(reports_to_csv(r).split_once('\n').map(|x| x.1).unwrap_or(""));
                }
            }
            Format::Table => {
                let mut out = format!("order {order} (trees up to order {max})\n");
                let width = reports.iter().map(|r| r.condition_id.len()).max().unwrap_or(0).max(9);
                let _ = writeln!(out, "{:<width$}  {:<4}  residual", "condition", "ok");
                for r in &reports {
                    let _ = writeln!(out, "{:<width$}  {:<4}  {}", r.condition_id, yes(r.satisfied), r.residual);
                }
                if let Some((p, eta, zeta, r, sufficient)) = &simplified {
                    let _ = writeln!(out, "simplified B({p}) C({eta}) D({zeta}): sufficient: {}", yes(*sufficient));
                    for x in r.iter().filter(|x| !x.satisfied) {
                        let _ = writeln!(out, "  {} = {}", x.condition_id, x.residual);
                    }
                }
                say(&out);
            }
        }
        Ok(())
    })
}

fn stability(ctx: &Ctx, a: &StabilityArgs) -> Result<()> {
    let any = load(&a.input)?;
    with_tableau!(&any, t => {
        let r = stability_function(t);
        let cert = r.a_stability();
        let l = r.is_l_stable();
        let alg = algebraic_stability(t);
        let sym = r.is_stability_symmetric_tol(ctx.structural_tol_of(t));
        let adj = adjoint_stability_identity(t).ok();
        let mut region = Value::Null;
        if a.grid.len() != 2 {
            return Err(usage("--grid takes two values nx,ny"));
        }
        if let Some(w) = &a.window {
            if w.len() != 4 {
                return Err(usage("--window takes four values x_min,x_max,y_min,y_max"));
            }
            let window = Window { x_min: w[0], x_max: w[1], y_min: w[2], y_max: w[3] };
            let sample = sample_region(&r, window, a.grid[0], a.grid[1]).map_err(|e| usage(e.to_string()))?;
            let inside = sample.points.iter().filter(|p| p.inside).count();
            if let Some(path) = &a.csv {
                write(path, &sample.to_csv())?;
            }
            if let Some(path) = &a.svg {
                write(path, &sample.to_svg())?;
            }
            if a.csv.is_none() && a.svg.is_none() {
                say(sample.to_csv());
                return Ok(());
            }
            region = json!({ "points": sample.points.len(), "inside": inside });
        } else if a.csv.is_some() || a.svg.is_some() {
            return Err(usage("--csv and --svg need --window"));
        }
        ctx.emit(
            json!({
                "name": t.name(),
                "numerator": r.numerator.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "denominator": r.denominator.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "a_stability": cert,
                "l_stable": l,
                "algebraic_stability": alg,
                "stability_symmetric": sym,
                "adjoint_identity": adj,
                "region": region,
            }),
            || {
                let mut out = format!("R(z) = {r}\n");
                let _ = writeln!(
                    out,
                    "A-stable: {} (poles in right half-plane: {}, max |R(iy)| = {} at y = {})",
                    yes(cert.a_stable),
                    yes(cert.poles_in_right_half_plane),
                    sci(cert.worst_boundary_value, 12),
                    sci(cert.worst_boundary_y, 6)
                );
                let _ = writeln!(out, "L-stable: {}", yes(l));
                let _ = writeln!(
                    out,
                    "algebraically stable: {} (b >= 0: {}, M psd: {}, M entrywise >= 0: {})",
                    yes(alg.algebraically_stable),
                    yes(alg.weights_nonnegative),
                    yes(alg.m_positive_semidefinite),
                    yes(alg.m_entrywise_nonnegative)
                );
                let _ = writeln!(out, "R(z) R(-z) = 1: {}", yes(sym));
                let adj_text = adj.map(yes).unwrap_or("n/a (zero weight)");
                let _ = writeln!(out, "symplectic adjoint has R(-z)^-1: {adj_text}");
                if !region.is_null() {
                    let _ = writeln!(out, "region: {} of {} grid points inside", region["inside"], region["points"]);
                }
                out
            },
        );
        Ok(())
    })
}

fn trace_path(a: &ConstructArgs) -> Option<PathBuf> {
    a.trace.clone().or_else(|| {
        a.out.as_ref().map(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            p.with_file_name(format!("{stem}.trace.json"))
        })
    })
}

fn construct(ctx: &Ctx, a: &ConstructArgs) -> Result<()> {
    let params = ConstructionParams::new(exact_arg("c2", &a.c2)?, exact_arg("alpha", &a.alpha)?);
    let (t, trace) = construct_ssrk5(&params)?;
    let doc = t.to_json();
    if let Some(path) = &a.out {
        write(path, &doc)?;
    }
    if let Some(path) = trace_path(a) {
        write(&path, &serde_json::to_string_pretty(&trace.to_json())?)?;
    }
    let b: Vec<String> = t.b().iter().map(|x| x.to_string()).collect();
    let summary = json!({
        "name": t.name(),
        "c2": params.c2.to_string(),
        "alpha": params.alpha.to_string(),
        "c3": t.c()[2].to_string(),
        "b": b,
        "fallback": trace.used_fallback,
    });
    if a.out.is_none() {
        say(&doc);
        eprintln!("c3 = {}, b = [{}]", t.c()[2], b.join(", "));
    } else {
        ctx.emit(summary, || {
            format!("{}: c3 = {}, b = [{}]\n", t.name(), t.c()[2], b.join(", "))
        });
    }
    Ok(())
}

fn sweep(ctx: &Ctx, a: &SweepArgs) -> Result<()> {
    let alpha = exact_arg("alpha", &a.alpha)?;
    let grid = a.c2.iter().map(|v| exact_arg("c2", v)).collect::<Result<Vec<_>>>()?;
    let points = sweep_family(&grid, &alpha);
    let mut rows = Vec::new();
    let mut text = String::new();
    for (k, p) in points.iter().enumerate() {
        match &p.result {
            Ok(t) => {
                if let Some(dir) = &a.out_dir {
                    write(&dir.join(format!("ssrk5-{k}.json")), &t.to_json())?;
                }
                rows.push(json!({ "c2": p.params.c2.to_string(), "ok": true, "c3": t.c()[2].to_string() }));
                let _ = writeln!(text, "c2 = {}: ok, c3 = {}", p.params.c2, t.c()[2]);
            }
            Err(e) => {
                rows.push(json!({ "c2": p.params.c2.to_string(), "ok": false, "error": e.to_string() }));
                let _ = writeln!(text, "c2 = {}: {e}", p.params.c2);
            }
        }
    }
    ctx.emit(json!({ "alpha": alpha.to_string(), "points": rows }), || text);
    Ok(())
}

fn problem(p: Problem) -> OdeProblem {
    match p {
        Problem::Kepler => kepler_problem(),
        Problem::Decay => linear_problem(-1.0),
    }
}

fn run_integrate(ctx: &Ctx, a: &IntegrateArgs) -> Result<()> {
    let any = load(&a.input)?;
    let pr = problem(a.problem);
    let steps = step_count(pr.initial_time, a.t_end, a.h).map_err(|e| usage(e.to_string()))?;
    let t = any.to_float()?;
    let y = integrate(&t, &pr, a.h, a.t_end)?;
    let exact = pr.exact(a.t_end)?;
    let err = error_norm(&y, &exact)?;
    ctx.emit(
        json!({ "method": t.name(), "problem": pr.name, "h": a.h, "T": a.t_end, "steps": steps, "state": y, "error": err }),
        || {
            let state: Vec<String> = y.iter().map(|v| format!("{v:.16e}")).collect();
            format!("{} steps, y(T) = [{}]\nerror = {}\n", steps, state.join(", "), sci(err, 6))
        },
    );
    Ok(())
}

fn convergence(ctx: &Ctx, a: &ConvergenceArgs) -> Result<()> {
    let any = load(&a.input)?;
    let pr = problem(a.problem);
    if a.halvings > 20 {
        return Err(usage("--halvings is limited to 20"));
    }
    for k in 0..=a.halvings {
        let h = a.h0 / (1u64 << k) as f64;
        step_count(pr.initial_time, a.t_end, h).map_err(|e| usage(format!("h = {h}: {e}")))?;
    }
    let t = any.to_float()?;
    let report = convergence_study(&t, &pr, a.h0, a.halvings, a.t_end)?;
    let format = if ctx.json { Format::Json } else { a.format };
    match format {
        Format::Json => say(serde_json::to_string_pretty(&report)? + "\n"),
        Format::Csv => say(report.to_csv()),
        Format::Table => say(report.to_table()),
    }
    Ok(())
}

fn list_catalog(ctx: &Ctx, a: &CatalogArgs) -> Result<()> {
    let entries = catalog();
    if let Some(dir) = &a.emit_all {
        for e in &entries {
            write(&dir.join(format!("{}.json", e.key)), &e.tableau.to_json())?;
        }
    }
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "key": e.key,
                "family": e.family,
                "stages": e.tableau.stages(),
                "scalar": e.tableau.kind().as_str(),
                "documented_order": e.documented_order,
            })
        })
        .collect();
    ctx.emit(json!(rows), || {
        let mut out = String::new();
        for e in &entries {
            let _ = writeln!(
                out,
                "{:<24} {:<17} s={} order {} ({})",
                e.key,
                serde_json::to_value(e.family)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                e.tableau.stages(),
                e.documented_order,
                e.tableau.kind().as_str()
            );
        }
        if let Some(dir) = &a.emit_all {
            let _ = writeln!(out, "wrote {} files to {}", entries.len(), dir.display());
        }
        out
    });
    Ok(())
}
