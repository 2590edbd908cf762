use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use melnikov_core::elliptic::{carlson_rd, carlson_rf, carlson_rj, complete_e, complete_k, complete_pi};
use melnikov_core::picard_fuchs::{
    pf_residual, wronskian, wronskian_fd, wronskian_limit_zero, wronskian_printed, MuFunction,
};
use melnikov_core::reduction::{
    psi_bound, psi_bound_rational, reduce as reduce_input, two_kind_bound, MuSpec, ReductionCase,
    ReductionInput,
};
use melnikov_core::sampling;
use melnikov_core::triangle::{
    level_params, melnikov_decompose as decompose, melnikov_eval_quadrature, melnikov_sweep,
    melnikov_zero_report, MelnikovEvaluator, PerturbationSpec,
};
use melnikov_core::zero_count::{clamp_interval, count_zeros, melnikov_bound, IEvaluator, ZeroReport};
use melnikov_core::Poly;

use crate::{CaseArg, CliError, Ctx, Kind, Output, SpecSource};

const SAMPLE_SPEC: &str = include_str!("../data/sample_n3.json");

type Res = Result<(), CliError>;

fn emit_json<T: Serialize>(v: &T) -> Res {
    let s = serde_json::to_string(v).map_err(|e| CliError::Domain(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn emit_csv(header: &[&str], rows: &[Vec<f64>]) -> Res {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let io = |e: csv::Error| CliError::Domain(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        // Shortest round-trip form, same as the JSON output.
        w.write_record(r.iter().map(|x| serde_json::Number::from_f64(*x).map_or_else(|| x.to_string(), |n| n.to_string())))
            .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(())
}

fn json_only(ctx: &Ctx, cmd: &str) -> Res {
    if ctx.out == Output::Csv {
        return Err(CliError::Schema(format!("{cmd} has no CSV form; use --out json")));
    }
    Ok(())
}

fn read_file(p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::Schema(format!("cannot read {}: {e}", p.display())))
}

fn summary(msg: impl AsRef<str>) {
    let _ = writeln!(std::io::stderr(), "{}", msg.as_ref());
}

/// `"special"` or comma-separated polynomial coefficients, lowest power first.
pub fn parse_mu(s: &str) -> Result<MuSpec, CliError> {
    if s.trim() == "special" {
        return Ok(MuSpec::Special);
    }
    let parts: Vec<&str> = s.split(',').collect();
    Ok(MuSpec::Poly(Poly::from_strings(&parts)?))
}

pub fn elliptic_eval(ctx: &Ctx, k: Option<f64>, mu: Option<f64>, kind: Kind, args: Option<Vec<f64>>) -> Res {
    let need_k = || k.ok_or_else(|| CliError::Schema("--k is required for this kind".into()));
    let need_mu = || mu.ok_or_else(|| CliError::Schema("--mu is required for this kind".into()));
    let arity = |n: usize| -> Result<Option<Vec<f64>>, CliError> {
        match &args {
            Some(a) if a.len() != n => Err(CliError::Schema(format!("--args needs {n} values, got {}", a.len()))),
            other => Ok(other.clone()),
        }
    };
    let value = match kind {
        Kind::K => complete_k(need_k()?)?,
        Kind::E => complete_e(need_k()?)?,
        Kind::Pi => complete_pi(need_mu()?, need_k()?)?,
        Kind::Rf => match arity(3)? {
            Some(a) => carlson_rf(a[0], a[1], a[2])?,
            None => {
                let k = need_k()?;
                carlson_rf(0.0, 1.0 - k * k, 1.0)?
            }
        },
        Kind::Rd => match arity(3)? {
            Some(a) => carlson_rd(a[0], a[1], a[2])?,
            None => {
                let k = need_k()?;
                carlson_rd(0.0, 1.0 - k * k, 1.0)?
            }
        },
        Kind::Rj => match arity(4)? {
            Some(a) => carlson_rj(a[0], a[1], a[2], a[3])?,
            None => {
                let k = need_k()?;
                carlson_rj(0.0, 1.0 - k * k, 1.0, 1.0 - need_mu()?)?
            }
        },
    };
    summary(format!("{kind:?} = {value}"));
    match ctx.out {
        Output::Json => emit_json(&json!({ "value": value })),
        Output::Csv => emit_csv(&["value"], &[vec![value]]),
    }
}

#[derive(Serialize)]
struct PfPoint {
    k: f64,
    first_order_residual: f64,
    second_order_residual: f64,
    wronskian: f64,
    wronskian_fd: f64,
    wronskian_rel_err: f64,
    wronskian_printed: f64,
    ok: bool,
}

pub fn pf_verify(ctx: &Ctx, mu_text: &str, ks: Option<Vec<f64>>) -> Res {
    let mu = parse_mu(mu_text)?.to_function();
    let tol = ctx.tol.unwrap_or(1e-4);
    let ks = ks.unwrap_or_else(|| {
        // A constant μ = 1/4 would hit μ = k² at ±1/2.
        if mu.is_constant() {
            vec![-0.8, -0.55, -0.2, 0.2, 0.55, 0.8]
        } else {
            vec![-0.8, -0.5, -0.2, 0.2, 0.5, 0.8]
        }
    });
    let mut points = Vec::new();
    for k in ks {
        let (r1, _) = pf_residual(&mu, k, 1e-4)?;
        let (_, r2) = pf_residual(&mu, k, 1e-3)?;
        let w = wronskian(&mu, k)?;
        let fd = wronskian_fd(&mu, k, 1e-3)?;
        let rel = (w - fd).abs() / fd.abs();
        points.push(PfPoint {
            k,
            first_order_residual: r1,
            second_order_residual: r2,
            wronskian: w,
            wronskian_fd: fd,
            wronskian_rel_err: rel,
            wronskian_printed: wronskian_printed(&mu, k)?,
            ok: r1 <= 1e-6 && r2 <= 1e-3 && rel <= tol,
        });
    }
    let limit = limit_check(&mu)?;
    let ok = points.iter().all(|p| p.ok) && limit.as_ref().is_none_or(|l| l["ok"] == json!(true));
    match ctx.out {
        Output::Json => emit_json(&json!({ "mu": mu_text, "points": points, "limit": limit, "ok": ok }))?,
        Output::Csv => {
            let rows: Vec<Vec<f64>> = points
                .iter()
                .map(|p| {
                    vec![
                        p.k,
                        p.first_order_residual,
                        p.second_order_residual,
                        p.wronskian,
                        p.wronskian_fd,
                        p.wronskian_printed,
                    ]
                })
                .collect();
            emit_csv(&["k", "r1", "r2", "w", "w_fd", "w_printed"], &rows)?;
        }
    }
    summary(format!("{} points, ok = {ok}", points.len()));
    if !ok {
        return Err(CliError::Verification("Picard-Fuchs or Wronskian check outside tolerance".into()));
    }
    Ok(())
}

fn limit_check(mu: &MuFunction) -> Result<Option<serde_json::Value>, CliError> {
    let Ok(lim) = wronskian_limit_zero(mu) else {
        return Ok(None);
    };
    let w = wronskian(mu, 0.01)?;
    let rel = (w - lim).abs() / lim.abs();
    Ok(Some(json!({ "limit": lim, "w_at_0_01": w, "rel_err": rel, "ok": rel <= 0.01 })))
}

pub fn bound(
    ctx: &Ctx,
    psi: Option<Vec<u64>>,
    rational: Option<Vec<u64>>,
    two_kind: Option<Vec<u64>>,
    melnikov: Option<u64>,
) -> Res {
    let given = [psi.is_some(), rational.is_some(), two_kind.is_some(), melnikov.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::Schema(
            "give exactly one of --psi, --rational, --two-kind, --melnikov".into(),
        ));
    }
    let (key, v) = if let Some(a) = psi {
        ("psi", psi_bound(a[0], a[1], a[2], a[3]))
    } else if let Some(a) = rational {
        ("psi", psi_bound_rational(a[0], a[1], a[2]))
    } else if let Some(a) = two_kind {
        ("bound", two_kind_bound(a[0], a[1]))
    } else {
        ("bound", melnikov_bound(melnikov.expect("checked above")))
    };
    summary(format!("{key} = {v}"));
    match ctx.out {
        Output::Json => emit_json(&json!({ key: v })),
        Output::Csv => emit_csv(&[key], &[vec![v as f64]]),
    }
}

fn case_of(c: CaseArg) -> ReductionCase {
    match c {
        CaseArg::PolySGe2 => ReductionCase::PolySGe2,
        CaseArg::PolySEq1 => ReductionCase::PolySEq1,
        CaseArg::ConstantMu => ReductionCase::ConstantMu,
        CaseArg::RationalSpecial => ReductionCase::RationalSpecial,
    }
}

fn load_input(path: &Option<PathBuf>) -> Result<Option<ReductionInput>, CliError> {
    let Some(p) = path else {
        return Ok(None);
    };
    let s = read_file(p)?;
    let input = serde_json::from_str(&s).map_err(|e| CliError::Schema(format!("{}: {e}", p.display())))?;
    Ok(Some(input))
}

pub fn reduce(ctx: &Ctx, spec: Option<PathBuf>, random: Option<CaseArg>) -> Res {
    json_only(ctx, "reduce")?;
    let input = match (load_input(&spec)?, random) {
        (Some(i), _) => i,
        (None, Some(c)) => sampling::reduction_input(&mut sampling::rng(ctx.seed), case_of(c), 3),
        (None, None) => return Err(CliError::Schema("give --spec or --random".into())),
    };
    let form = reduce_input(&input)?;
    let ok = form.degrees_ok();
    emit_json(&json!({ "input": input, "form": form, "degrees_ok": ok }))?;
    summary(format!(
        "deg M = {:?} (cap {}), deg N = {:?} (cap {})",
        form.m1.degree(),
        form.deg_bound_m,
        form.n1.degree(),
        form.deg_bound_n
    ));
    if !ok {
        return Err(CliError::Verification("reduced degrees exceed their caps".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct ZerosOut<'a> {
    input: &'a ReductionInput,
    #[serde(flatten)]
    report: &'a ZeroReport,
}

pub fn zeros(ctx: &Ctx, spec: Option<PathBuf>, random: bool, lo: f64, hi: f64) -> Res {
    let input = match load_input(&spec)? {
        Some(i) => i,
        None if random => {
            let mut rng = sampling::rng(ctx.seed);
            let mut p = || {
                let d = rand::Rng::gen_range(&mut rng, 0..=3);
                sampling::poly(&mut rng, d)
            };
            let (a, b, c) = (p(), p(), p());
            ReductionInput::new(a, b, c, MuSpec::Special)
        }
        None => return Err(CliError::Schema("give --spec or --random".into())),
    };
    let report = count_zeros(&input.p, &input.q, &input.r, &input.mu, (lo, hi), ctx.grid)?;
    match ctx.out {
        Output::Json => emit_json(&ZerosOut {
            input: &input,
            report: &report,
        })?,
        Output::Csv => {
            let (a, b) = clamp_interval(lo, hi)?;
            let ev = IEvaluator::new(&input.p, &input.q, &input.r, &input.mu);
            let mut rows = Vec::with_capacity(ctx.grid + 1);
            for i in 0..=ctx.grid {
                let k = a + (b - a) * i as f64 / ctx.grid as f64;
                rows.push(vec![k, ev.eval(k)?]);
            }
            emit_csv(&["k", "I"], &rows)?;
        }
    }
    summary(format!("{} zeros, bound {}", report.count, report.bound.unwrap_or_default()));
    if !report.bound_satisfied {
        return Err(CliError::Verification(format!(
            "count {} exceeds bound {:?}",
            report.count, report.bound
        )));
    }
    Ok(())
}

pub fn load_spec(ctx: &Ctx, src: &SpecSource) -> Result<PerturbationSpec, CliError> {
    if let Some(p) = &src.spec {
        return Ok(PerturbationSpec::from_json(&read_file(p)?)?);
    }
    if src.sample {
        return Ok(PerturbationSpec::from_json(SAMPLE_SPEC)?);
    }
    let n = src.random.expect("clap requires one source");
    if n > 16 {
        return Err(CliError::Schema(format!("random degree {n} too large (max 16)")));
    }
    Ok(sampling::perturbation_spec(&mut sampling::rng(ctx.seed), n))
}

pub fn melnikov_decompose(ctx: &Ctx, src: &SpecSource) -> Res {
    json_only(ctx, "melnikov-decompose")?;
    let spec = load_spec(ctx, src)?;
    let d = decompose(&spec)?;
    let caps_ok = d.generator_caps_ok();
    let phi_deg = d.total_phi().degree().unwrap_or(0);
    let phi_ok = phi_deg <= d.phi_cap();
    let spec_json: serde_json::Value =
        serde_json::from_str(&spec.to_json()).map_err(|e| CliError::Domain(e.to_string()))?;
    emit_json(&json!({
        "spec": spec_json,
        "decomposition": d,
        "generator_caps_ok": caps_ok,
        "phi_degree": phi_deg,
        "phi_cap": d.phi_cap(),
        "ok": caps_ok && phi_ok,
    }))?;
    summary(format!("n = {}, caps ok = {caps_ok}, deg phi = {phi_deg} (cap {})", spec.n, d.phi_cap()));
    if !(caps_ok && phi_ok) {
        return Err(CliError::Verification("decomposition degrees exceed their caps".into()));
    }
    Ok(())
}

pub fn melnikov_eval(ctx: &Ctx, src: &SpecSource, hs: Option<Vec<f64>>, points: usize, check: bool) -> Res {
    let spec = load_spec(ctx, src)?;
    let d = decompose(&spec)?;
    let rows: Vec<(f64, f64, f64)> = match hs {
        Some(hs) => {
            let ev = MelnikovEvaluator::new(&d);
            hs.iter()
                .map(|&h| {
                    let c = level_params(h)?;
                    Ok((h, c.u, ev.eval_curve(&c)?))
                })
                .collect::<Result<_, melnikov_core::Error>>()?
        }
        None => melnikov_sweep(&d, points)?,
    };
    let tol = ctx.tol.unwrap_or(1e-6);
    let mut quad = Vec::new();
    let mut ok = true;
    if check {
        for &(h, _, v) in &rows {
            let q = melnikov_eval_quadrature(&spec, h)?;
            ok &= (v - q).abs() <= (tol * q.abs()).max(1e-9);
            quad.push(q);
        }
    }
    match ctx.out {
        Output::Json => {
            let body: Vec<serde_json::Value> = rows
                .iter()
                .enumerate()
                .map(|(i, &(h, u, v))| match quad.get(i) {
                    Some(q) => json!({ "h": h, "u": u, "I": v, "I_quad": q }),
                    None => json!({ "h": h, "u": u, "I": v }),
                })
                .collect();
            let mut out = json!({ "rows": body });
            if check {
                out["ok"] = json!(ok);
            }
            emit_json(&out)?;
        }
        Output::Csv => {
            let table: Vec<Vec<f64>> = rows
                .iter()
                .enumerate()
                .map(|(i, &(h, u, v))| {
                    let mut r = vec![h, u, v];
                    r.extend(quad.get(i));
                    r
                })
                .collect();
            let header: &[&str] = if check { &["h", "u", "I", "I_quad"] } else { &["h", "u", "I"] };
            emit_csv(header, &table)?;
        }
    }
    summary(format!("{} rows{}", rows.len(), if check { format!(", quadrature check ok = {ok}") } else { String::new() }));
    if !ok {
        return Err(CliError::Verification("closed form and direct quadrature disagree".into()));
    }
    Ok(())
}

pub fn melnikov_zeros(ctx: &Ctx, src: &SpecSource) -> Res {
    json_only(ctx, "melnikov-zeros")?;
    let spec = load_spec(ctx, src)?;
    if ctx.grid < 64 {
        return Err(CliError::Domain(format!("grid = {} must be at least 64", ctx.grid)));
    }
    let r = melnikov_zero_report(&spec, ctx.grid)?;
    let bound = r.bound.unwrap_or_else(|| melnikov_bound(spec.n as u64));
    let roots: Vec<f64> = r.roots.iter().map(|b| b.location).collect();
    emit_json(&json!({
        "count": r.count,
        "bound": bound,
        "ok": r.bound_satisfied,
        "roots": roots,
        "touch_points": r.touch_points,
        "grid_used": r.grid_used,
    }))?;
    summary(format!("{} zeros, bound {bound}", r.count));
    if !r.bound_satisfied {
        return Err(CliError::Verification(format!("count {} exceeds bound {bound}", r.count)));
    }
    Ok(())
}
